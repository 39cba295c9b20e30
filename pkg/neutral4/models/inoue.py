"""Inoue surfaces S+: eigendata of N, the generators of the deck group and the omega_f metrics."""

import logging
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from neutral4.config import get_settings
from neutral4.errors import InoueParameterError, SpecResolutionError
from neutral4.exprdsl.expr import Const, Coord, Expr, add, mul
from neutral4.exprdsl.parser import parse_expression
from neutral4.geometry.operations import (
    LocalGeometry,
    bracket_at,
    form_at,
    metric_at,
    pullback_metric,
    pullback_oneform,
)
from neutral4.geometry.sampling import images_in_domain, sample_points
from neutral4.geometry.spec import DiffeoMap, FormField, GeometrySpec, metric_from_coframe
from neutral4.schemas.models import InoueConstants
from neutral4.schemas.report import CheckReport, ClauseResult, Tier
from neutral4.structures.construction import EndomorphismField, EndomorphismKind, StructureTriple
from neutral4.structures.integrability import lee_form_differential, lee_forms
from neutral4.structures.recovery import (
    FormTriple,
    build_from_omega_pair,
    recover_structure_from_forms,
    structure_from_forms,
)
from neutral4.tensor.forms import exterior_derivative, wedge11, wedge22

logger = logging.getLogger(__name__)
settings = get_settings()

X, Y, U, V = (Coord(k, name) for k, name in enumerate("xyuv"))

# f(u, v) for the metrics g_f = g + f (a3^2 + a4^2); each is annihilated by X1 and X2
OMEGA_F_CHOICES: Dict[str, str] = {
    "one": "1",
    "two_plus_cos_u": "2 + cos(u)",
    "gaussian_u": "exp(-u^2)",
}


def _integer(value: float, name: str) -> int:
    if not float(value).is_integer():
        raise InoueParameterError(f"{name} must be an integer, got {value}")
    return int(value)


def _normalized(vector: np.ndarray) -> np.ndarray:
    for component in vector:
        if abs(component) > settings.tol_exact:
            return vector / component
    raise InoueParameterError("zero eigenvector")


def _eigenvector(n: np.ndarray, eigenvalue: float) -> np.ndarray:
    # the kernel of N - eigenvalue*Id is the last right-singular vector
    _, _, vh = np.linalg.svd(n - eigenvalue * np.eye(2))
    return _normalized(vh[-1])


def inoue_constants(
    n: Sequence[Sequence[float]],
    p: float = 0,
    q: float = 0,
    r: float = 1,
    t1: float = 0.0,
    t2: float = 0.0,
    epsilon: float = 1,
) -> InoueConstants:
    """
    Eigendata of N and the translation constants (c_1, c_2) of the generators.

    (c_1, c_2) solves eps*c = c N^tr + e + ((b_1 a_2 - b_2 a_1) / r) (p, q) with
    e_k = n_k1(n_k1 - 1) a_1 b_1 / 2 + n_k2(n_k2 - 1) a_2 b_2 / 2 + n_k1 n_k2 b_1 a_2.
    Eigenvectors are normalized so that their first nonzero component is 1.

    Args:
        n: Integer 2x2 matrix with det 1
        p: Integer
        q: Integer
        r: Nonzero integer
        t1: Real part of t
        t2: Imaginary part of t
        epsilon: +1 or -1

    Returns:
        InoueConstants with the residual of the linear system

    Raises:
        InoueParameterError: non-integer entries, det N != 1, complex or
            non-hyperbolic eigenvalues, r = 0, or a singular system
    """
    matrix = np.array([[float(x) for x in row] for row in n])
    if matrix.shape != (2, 2):
        raise InoueParameterError(f"N must be 2x2, got shape {matrix.shape}")
    entries = [[_integer(x, f"N[{i}][{j}]") for j, x in enumerate(row)] for i, row in enumerate(matrix)]
    p_, q_, r_ = _integer(p, "p"), _integer(q, "q"), _integer(r, "r")
    eps = _integer(epsilon, "epsilon")
    if r_ == 0:
        raise InoueParameterError("r must be nonzero")
    if eps not in (1, -1):
        raise InoueParameterError(f"epsilon must be +1 or -1, got {eps}")
    det = entries[0][0] * entries[1][1] - entries[0][1] * entries[1][0]
    if det != 1:
        raise InoueParameterError(f"det N must be 1, got {det}")

    eigenvalues = np.linalg.eigvals(matrix)
    if np.max(np.abs(eigenvalues.imag)) > 0.0:
        raise InoueParameterError(f"N has complex eigenvalues {eigenvalues}")
    alpha = float(np.max(eigenvalues.real))
    if not alpha > 1.0:
        raise InoueParameterError(f"N has no eigenvalue greater than 1 (eigenvalues {eigenvalues.real})")
    a = _eigenvector(matrix, alpha)
    b = _eigenvector(matrix, 1.0 / alpha)

    e = np.array(
        [
            0.5 * nk1 * (nk1 - 1) * a[0] * b[0] + 0.5 * nk2 * (nk2 - 1) * a[1] * b[1] + nk1 * nk2 * b[0] * a[1]
            for nk1, nk2 in entries
        ]
    )
    shift = (b[0] * a[1] - b[1] * a[0]) / r_
    rhs = e + shift * np.array([p_, q_], dtype=float)
    system = eps * np.eye(2) - matrix  # (eps Id - N) c^T = rhs^T
    if abs(np.linalg.det(system)) < settings.tol_exact:
        raise InoueParameterError(f"epsilon = {eps} is an eigenvalue of N^tr; the system for c is singular")
    c = np.linalg.solve(system, rhs)
    residual = float(np.max(np.abs(eps * c - (c @ matrix.T + rhs))))
    logger.debug(f"Inoue constants: alpha={alpha}, a={a}, b={b}, c={c}, residual={residual:.3e}")
    return InoueConstants(
        n=entries,
        alpha=alpha,
        a=[float(x) for x in a],
        b=[float(x) for x in b],
        p=p_,
        q=q_,
        r=r_,
        t1=float(t1),
        t2=float(t2),
        epsilon=eps,
        e=[float(x) for x in e],
        c=[float(x) for x in c],
        cc_residual=residual,
    )


def constants_from_params(params: Dict[str, float]) -> InoueConstants:
    return inoue_constants(
        [[params["n11"], params["n12"]], [params["n21"], params["n22"]]],
        params["p"],
        params["q"],
        params["r"],
        params["t1"],
        params["t2"],
        params["epsilon"],
    )


def _affine(coef: Sequence[float], shift: float) -> Expr:
    expr: Expr = Const(float(shift))
    for k, value in enumerate(coef):
        if value != 0.0:
            expr = add(expr, mul(Const(float(value)), (X, Y, U, V)[k]))
    return expr


def inoue_generators(c: InoueConstants) -> List[DiffeoMap]:
    """
    g_0, g_1, g_2, g_3 in the real coordinates (x, y, u, v).

    g_0(z, w) = (eps z + (1 + eps) t / 2, alpha w), g_k(z, w) = (z + b_k w + c_k, w + a_k)
    and g_3(z, w) = (z + (b_1 a_2 - b_2 a_1) / r, w). All four preserve v > 0.
    """
    eps, half = c.epsilon, 0.5 * (1 + c.epsilon)
    maps = [
        DiffeoMap(
            "g0",
            (
                _affine([eps, 0, 0, 0], half * c.t1),
                _affine([0, eps, 0, 0], half * c.t2),
                _affine([0, 0, c.alpha, 0], 0.0),
                _affine([0, 0, 0, c.alpha], 0.0),
            ),
        )
    ]
    for k in range(2):
        bk = c.b[k]
        maps.append(
            DiffeoMap(
                f"g{k + 1}",
                (
                    _affine([1, 0, bk, 0], c.c[k]),
                    _affine([0, 1, 0, bk], 0.0),
                    _affine([0, 0, 1, 0], c.a[k]),
                    _affine([0, 0, 0, 1], 0.0),
                ),
            )
        )
    translation = (c.b[0] * c.a[1] - c.b[1] * c.a[0]) / c.r
    maps.append(
        DiffeoMap(
            "g3",
            (_affine([1, 0, 0, 0], translation), Y, U, V),
        )
    )
    return maps


# Metric, complex structure and the omega_f family --------------------------


def frame_forms() -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Omega_1, Omega_2, Omega_3 in the coframe (a1, a2, a3, a4)."""
    e = np.eye(4)
    return (
        wedge11(e[0], e[2]) + wedge11(e[1], e[3]),
        wedge11(e[0], e[2]) - wedge11(e[1], e[3]),
        wedge11(e[0], e[3]) + wedge11(e[1], e[2]),
    )


def inoue_metric(geom: GeometrySpec) -> GeometrySpec:
    """Replace the metric by the one recovered from Omega_1, Omega_2, Omega_3 on the coframe."""
    gram = recover_structure_from_forms(*frame_forms()).g
    coframe = [geom.form(f"a{k}").components for k in range(1, 5)]
    metric = metric_from_coframe(coframe, [[Const(float(x)) for x in row] for row in gram])
    return geom.with_metric(metric)


def bind_derived(
    geom: GeometrySpec, overrides: Optional[Dict[str, float]] = None
) -> Tuple[GeometrySpec, InoueConstants]:
    """
    Bind ln(alpha) from N and rebuild the metric.

    Raises:
        SpecResolutionError: `lnalpha` was overridden directly
        InoueParameterError: invalid N, p, q, r or epsilon
    """
    if overrides and "lnalpha" in overrides:
        raise SpecResolutionError("'lnalpha' is derived from N and cannot be set", "builtin")
    constants = constants_from_params(geom.params)
    params = dict(geom.params)
    params["lnalpha"] = float(np.log(constants.alpha))
    bound = GeometrySpec(geom.name, geom.document, geom.metric, params, geom.domain, geom.structure_constants)
    return inoue_metric(bound), constants


def standard_complex_structure() -> EndomorphismField:
    """I d/dx = d/dy, I d/du = d/dv."""
    zero, one, minus = Const(0.0), Const(1.0), Const(-1.0)
    rows = [
        [zero, minus, zero, zero],
        [one, zero, zero, zero],
        [zero, zero, zero, minus],
        [zero, zero, one, zero],
    ]
    return EndomorphismField.from_exprs("I", EndomorphismKind.COMPLEX, rows)


def omega_f_form(geom: GeometrySpec, label: str) -> FormField:
    """omega_f = Omega_1 + f a3 ^ a4."""
    try:
        text = OMEGA_F_CHOICES[label]
    except KeyError:
        raise SpecResolutionError(f"unknown omega_f choice '{label}'", "omega_f_form") from None
    f = parse_expression(text, geom.document.symbol_table(), source=f"omega_f[{label}]")
    base, a34 = geom.form("Omega1").components, geom.form("a34").components
    rows = tuple(tuple(add(base[i][j], mul(f, a34[i][j])) for j in range(4)) for i in range(4))
    return FormField(f"omega_f[{label}]", 2, rows)


def inoue_omega_f_geometry(
    geom: GeometrySpec, label: str, samples: Optional[int] = None, seed: Optional[int] = None
) -> StructureTriple:
    """
    The triple (I, S, T) of the pair (Omega, omega_f) on the metric omega_f(., I.).

    Omega = Omega_2 + i Omega_3 = (a1 + i a2) ^ (a3 + i a4) stays fixed while the
    Kaehler-type form changes; its geometry is named ``inoue_s_plus[omega_f[label]]``.
    """
    omega = omega_f_form(geom, label)
    return build_from_omega_pair(
        geom, standard_complex_structure(), (geom.form("Omega2"), geom.form("Omega3")), omega, samples, seed
    )


def inoue_triple(geom: GeometrySpec) -> StructureTriple:
    return structure_from_forms(
        geom, FormTriple(geom.form("Omega1"), geom.form("Omega2"), geom.form("Omega3")), name="Omega"
    )


# Structure checks ----------------------------------------------------------


def _sup(array) -> float:
    return float(np.max(np.abs(array)))


def inoue_structure_at(
    geom: GeometrySpec, constants: InoueConstants, maps: Sequence[DiffeoMap], p: Sequence[float]
) -> Dict[str, float]:
    """Residuals of the coframe identities, frame brackets and generator invariance at one point."""
    alphas = [geom.form(f"a{k}") for k in range(1, 5)]
    frame = [geom.field(f"X{k}") for k in range(1, 5)]
    a = [form_at(geom, f, p) for f in alphas]
    local = LocalGeometry(geom, p)
    x = [local.vector(f, order=0).value for f in frame]
    twist = constants.t2 / geom.params["lnalpha"]

    duality = max(abs(a[i] @ x[j] - (1.0 if i == j else 0.0)) for i in range(4) for j in range(4))

    expected_d = [
        wedge11(a[2], a[1]) - twist * wedge11(a[2], a[3]),
        wedge11(a[3], a[1]),
        wedge11(a[2], a[3]),
        np.zeros((4, 4)),
    ]
    d_alpha = [exterior_derivative(geom, f, p) for f in alphas]
    d_scale = max(1.0, max(_sup(d) for d in expected_d))
    d_residual = max(_sup(d - e) for d, e in zip(d_alpha, expected_d)) / d_scale

    expected_brackets = {
        (1, 2): x[0],
        (1, 3): x[1],
        (2, 3): -x[2] + twist * x[0],
    }
    bracket_residual = 0.0
    for i in range(4):
        for j in range(i + 1, 4):
            value = bracket_at(geom, frame[i], frame[j], p)
            target = expected_brackets.get((i, j), np.zeros(4))
            bracket_residual = max(bracket_residual, _sup(value - target) / max(1.0, _sup(target)))

    forms = [form_at(geom, geom.form(f"Omega{k}"), p) for k in (1, 2, 3)]
    volume = 2.0 * float(np.linalg.det(np.array(a)))
    squares = [wedge22(f, f) for f in forms]
    volume_residual = max(abs(-squares[0] - volume), abs(squares[1] - volume), abs(squares[2] - volume))
    volume_residual /= max(1.0, abs(volume))

    invariance = 0.0
    g = metric_at(geom, p)
    for phi in maps:
        for form, value in zip(alphas, a):
            invariance = max(invariance, _sup(pullback_oneform(geom, form, phi, p) - value) / max(1.0, _sup(value)))
        invariance = max(invariance, _sup(pullback_metric(geom, phi, p) - g) / max(1.0, _sup(g)))

    triple = inoue_triple(geom)
    thetas = lee_forms(geom, triple, p)
    lee = max(_sup(theta + a[3]) for theta in thetas) / max(1.0, _sup(a[3]))
    lee_closed = _sup(lee_form_differential(geom, triple, p))
    return {
        "duality": duality,
        "d_alpha": d_residual,
        "brackets": bracket_residual,
        "volume": volume_residual,
        "generator_invariance": invariance,
        "lee_is_minus_a4": lee,
        "lee_closed": lee_closed,
    }


_INOUE_CLAUSES = [
    ("duality", Tier.ALGEBRAIC, "a_i(X_j) = delta_ij"),
    ("d_alpha", Tier.FIRST_DERIVATIVE, "da1 = a3^a2 - (t2/ln alpha) a3^a4, da2 = a4^a2, da3 = a3^a4, da4 = 0"),
    ("brackets", Tier.FIRST_DERIVATIVE, "[X2,X3] = X1, [X2,X4] = X2, [X3,X4] = -X3 + (t2/ln alpha) X1"),
    ("volume", Tier.ALGEBRAIC, "-Omega_1^2 = Omega_2^2 = Omega_3^2 = 2 a1^a2^a3^a4"),
    ("generator_invariance", Tier.ALGEBRAIC, "a_i and g invariant under g0..g3"),
    ("lee_is_minus_a4", Tier.FIRST_DERIVATIVE, "theta = -a4"),
    ("lee_closed", Tier.CURVATURE, "d theta = 0"),
]


def inoue_structure_report(
    geom: GeometrySpec,
    constants: InoueConstants,
    points: Sequence[Sequence[float]],
    values: List[Dict[str, float]],
    seed: Optional[int] = None,
    tol: Optional[float] = None,
) -> CheckReport:
    matrix = np.array(constants.n, dtype=float)
    eigen = max(
        _sup(matrix @ np.array(constants.a) - constants.alpha * np.array(constants.a)),
        _sup(matrix @ np.array(constants.b) - np.array(constants.b) / constants.alpha),
    )
    clauses = [
        ClauseResult.from_residuals(name, tier, [v[name] for v in values], note=note, override=tol)
        for name, tier, note in _INOUE_CLAUSES
    ]
    clauses.append(
        ClauseResult.from_residuals("eigenvectors", Tier.EXACT, [eigen], note="N a = alpha a, N b = b / alpha")
    )
    clauses.append(
        ClauseResult.from_residuals(
            "translation_system", Tier.ALGEBRAIC, [constants.cc_residual], note="constants c solve their linear system"
        )
    )
    pinned = {"alpha": constants.alpha, "t2": constants.t2, "epsilon": constants.epsilon}
    return CheckReport.assemble("inoue_structure", geom.name, points, clauses, seed=seed, pinned=pinned)


def inoue_sample(geom: GeometrySpec, maps: Sequence[DiffeoMap], samples: int, seed: Optional[int] = None):
    """Seeded points whose images under every generator stay in the domain box."""
    return sample_points(geom, samples, seed, accept=images_in_domain(geom, maps))


def check_inoue_structure(
    geom: GeometrySpec, constants: InoueConstants, samples: int, seed: Optional[int] = None, tol: Optional[float] = None
) -> CheckReport:
    maps = inoue_generators(constants)
    sample = inoue_sample(geom, maps, samples, seed)
    values = [inoue_structure_at(geom, constants, maps, p) for p in sample.points]
    return inoue_structure_report(geom, constants, sample.points, values, sample.seed, tol)
