"""Builtin models: shipped geometry documents with their distinguished fields and expectations."""

import logging
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Callable, Dict, List, Mapping, Optional, Tuple

from neutral4.config import get_settings
from neutral4.errors import SpecResolutionError
from neutral4.exprdsl.document import GeometryDocument, ParamDecl, parse_geometry
from neutral4.geometry.spec import FormField, GeometrySpec, VectorField, resolve_geometry
from neutral4.models import inoue, kodaira
from neutral4.schemas.models import InoueConstants

logger = logging.getLogger(__name__)
settings = get_settings()

SUITE_NAMES = (
    "signature",
    "curvature",
    "weyl_split",
    "para_hyperhermitian",
    "killing_pair",
    "david",
    "lee",
    "inoue_invariance",
    "hopf_remark",
    "ad_oracle",
)

_COMMON = ("signature", "curvature", "weyl_split", "para_hyperhermitian", "killing_pair", "david", "lee")


@dataclass(frozen=True)
class ModelInfo:
    """Static facts about a model: what it claims and which suites pin those claims."""

    name: str
    summary: str
    manifest: Tuple[str, ...] = ()
    expected_failures: Tuple[str, ...] = ()
    extra_fields: Tuple[str, ...] = ()
    forms: Tuple[str, ...] = ()
    flat: bool = False
    ricci_flat: bool = False
    # scalar curvature is the same at every point
    constant_scalar: bool = False
    # Lee form of the reference triple as (coefficient, 1-form name); None means zero
    lee: Optional[Tuple[float, str]] = None
    # (Omega_1, Omega_2, Omega_3) form names when the model ships its triple as forms
    triple_forms: Optional[Tuple[str, str, str]] = None
    # X and Y are real holomorphic for the triple built from them
    holomorphic_pair: bool = False
    builtin: bool = True


@dataclass(frozen=True)
class ModelBundle:
    """
    A resolved geometry with everything the suites need.

    X and Y are the distinguished orthogonal null pair (None for a geometry
    file that declares no fields named X and Y); `extra_fields` are further
    shipped fields by name.
    """

    info: ModelInfo
    geometry: GeometrySpec
    X: Optional[VectorField] = None
    Y: Optional[VectorField] = None
    extra_fields: Dict[str, VectorField] = field(default_factory=dict)
    forms: Dict[str, FormField] = field(default_factory=dict)
    params: Tuple[ParamDecl, ...] = ()
    inoue: Optional[InoueConstants] = None

    @property
    def name(self) -> str:
        return self.geometry.name

    @property
    def manifest(self) -> Tuple[str, ...]:
        return self.info.manifest

    @property
    def expected_failures(self) -> Tuple[str, ...]:
        return self.info.expected_failures


MODELS: Dict[str, ModelInfo] = {
    "flat_neutral": ModelInfo(
        name="flat_neutral",
        summary="flat R^{2,2} with metric diag(1,1,-1,-1); X = E1+E3, Y = E2+E4",
        manifest=_COMMON + ("ad_oracle",),
        constant_scalar=True,
        extra_fields=("E1", "E2", "E3", "E4", "U", "D"),
        flat=True,
        holomorphic_pair=True,
        ricci_flat=True,
    ),
    "petean_torus": ModelInfo(
        name="petean_torus",
        summary="Ricci-flat Kaehler torus alpha dz dzbar + 2 Re(dz dwbar), alpha = a0 + cos(x); X = Re(d/dw)",
        manifest=_COMMON + ("ad_oracle",),
        constant_scalar=True,
        forms=("dx", "dy", "du", "dv"),
        ricci_flat=True,
        holomorphic_pair=True,
    ),
    "kodaira": ModelInfo(
        name="kodaira",
        summary="primary Kodaira surface, alpha = cos(x) - gamma z - conj(gamma) zbar; X = Re(d/dw)",
        manifest=_COMMON + ("ad_oracle",),
        constant_scalar=True,
        ricci_flat=True,
        holomorphic_pair=True,
    ),
    "sl2r_r": ModelInfo(
        name="sl2r_r",
        summary="universal cover of SL(2,R) x R, bi-invariant metric; X = V+B, Y = A+C",
        manifest=_COMMON + ("ad_oracle",),
        constant_scalar=True,
        extra_fields=("V", "A", "B", "C"),
        forms=("theta", "alpha", "beta", "gamma", "Omega_re", "Omega_im", "omega"),
        lee=(1.0, "theta"),
        triple_forms=("omega", "Omega_re", "Omega_im"),
    ),
    "inoue_s_plus": ModelInfo(
        name="inoue_s_plus",
        summary="Inoue surface S+ on C x H with coframe a1..a4; X = X1, Y = X2",
        manifest=_COMMON + ("inoue_invariance", "ad_oracle"),
        constant_scalar=True,
        extra_fields=("X1", "X2", "X3", "X4"),
        forms=("a1", "a2", "a3", "a4", "Omega1", "Omega2", "Omega3", "a34"),
        lee=(-1.0, "a4"),
        triple_forms=("Omega1", "Omega2", "Omega3"),
        holomorphic_pair=True,
    ),
    "hopf": ModelInfo(
        name="hopf",
        summary="S^1 x SU(2) with frame metric diag(1,1,-1,-1); X = X1+X3, Y = X2+X4",
        manifest=_COMMON + ("hopf_remark", "ad_oracle"),
        constant_scalar=True,
        expected_failures=("killing_pair", "para_hyperhermitian", "lee"),
        extra_fields=("X1", "X2", "X3", "X4"),
    ),
}


def model_path(name: str) -> Path:
    return settings.models_dir / f"{name}.geom"


def _resolve_info(name: str) -> ModelInfo:
    try:
        return MODELS[name]
    except KeyError:
        raise SpecResolutionError(f"unknown model '{name}'; known models: {', '.join(MODELS)}", "builtin") from None


def _bind_kodaira(geom: GeometrySpec, overrides: Mapping[str, float]) -> Tuple[GeometrySpec, None]:
    if "gamma1" in overrides or "gamma2" in overrides:
        return geom, None
    gamma1, gamma2 = kodaira.solve_kodaira_gamma(geom)
    drift = max(abs(gamma1 - geom.params["gamma1"]), abs(gamma2 - geom.params["gamma2"]))
    if drift > settings.tol_algebraic:
        logger.warning(f"kodaira: solved gamma ({gamma1}, {gamma2}) differs from the document defaults")
        return replace(geom, params={**geom.params, "gamma1": gamma1, "gamma2": gamma2}), None
    return geom, None


_BINDERS: Dict[str, Callable[[GeometrySpec, Mapping[str, float]], Tuple[GeometrySpec, Optional[InoueConstants]]]] = {
    "kodaira": _bind_kodaira,
    "inoue_s_plus": lambda geom, overrides: inoue.bind_derived(geom, dict(overrides)),
}


def _read_document(path: Path, operation: str) -> GeometryDocument:
    if not path.is_file():
        raise SpecResolutionError(f"geometry file {path} does not exist", operation)
    return parse_geometry(path.read_text(encoding="utf-8"))


def load_document(name: str) -> GeometryDocument:
    return _read_document(model_path(name), "builtin")


def _optional_field(geom: GeometrySpec, name: str) -> Optional[VectorField]:
    try:
        return geom.field(name)
    except SpecResolutionError:
        return None


def builtin(name: str, params: Optional[Mapping[str, float]] = None) -> ModelBundle:
    """
    Resolve a builtin model.

    Args:
        name: One of the registered model names
        params: Parameter overrides

    Returns:
        ModelBundle with the geometry, the distinguished pair and shipped objects

    Raises:
        SpecResolutionError: unknown model or parameter
        InoueParameterError: invalid Inoue parameters
    """
    info = _resolve_info(name)
    overrides = dict(params or {})
    doc = load_document(name)
    if "lnalpha" in overrides and name == "inoue_s_plus":
        raise SpecResolutionError("'lnalpha' is derived from N and cannot be set", "builtin")
    geom = resolve_geometry(doc, overrides)
    constants = None
    binder = _BINDERS.get(name)
    if binder is not None:
        geom, constants = binder(geom, overrides)
    bundle = ModelBundle(
        info=info,
        geometry=geom,
        X=geom.field("X"),
        Y=geom.field("Y"),
        extra_fields={f: geom.field(f) for f in info.extra_fields},
        forms={f: geom.form(f) for f in info.forms},
        params=doc.params,
        inoue=constants,
    )
    logger.debug(f"Loaded builtin model '{name}' with params {geom.params}")
    return bundle


def load_geometry(ref: str, params: Optional[Mapping[str, float]] = None) -> ModelBundle:
    """
    Resolve a geometry reference: a builtin model name or a path to a .geom file.

    A file geometry claims nothing: its manifest is empty, and the pair
    (X, Y) is taken from fields named X and Y when the file declares them.
    """
    if ref in MODELS:
        return builtin(ref, params)
    path = Path(ref)
    if path.suffix != ".geom" and not path.exists():
        raise SpecResolutionError(
            f"'{ref}' is neither a builtin model ({', '.join(MODELS)}) nor a .geom file", "load_geometry"
        )
    doc = _read_document(path, "load_geometry")
    geom = resolve_geometry(doc, params)
    info = ModelInfo(name=doc.name, summary=f"geometry file {path}", builtin=False)
    logger.info(f"Loaded geometry '{doc.name}' from {path}")
    return ModelBundle(
        info=info,
        geometry=geom,
        X=_optional_field(geom, "X"),
        Y=_optional_field(geom, "Y"),
        forms={d.name: geom.form(d.name) for d in doc.forms},
        params=doc.params,
    )


def list_models() -> List[str]:
    return list(MODELS)


def describe_model(name: str) -> str:
    """Human-readable description: summary, parameters with defaults and docs, manifest."""
    info = _resolve_info(name)
    doc = load_document(name)
    lines = [f"{info.name}: {info.summary}", f"  backend: {doc.backend.value} ({' '.join(doc.names)})"]
    if doc.params:
        lines.append("  parameters:")
        for param in doc.params:
            text = f"  {param.doc}" if param.doc else ""
            lines.append(f"    {param.name} = {param.default:g}{text}")
    lines.append(f"  fields: {', '.join(d.name for d in doc.fields)}")
    if doc.forms:
        lines.append(f"  forms: {', '.join(d.name for d in doc.forms)}")
    lines.append(f"  suites: {', '.join(info.manifest)}")
    if info.expected_failures:
        lines.append(f"  expected failures: {', '.join(info.expected_failures)}")
    return "\n".join(lines)
