"""Hodge star, wedge products, exterior derivative, codifferential and divergence.

Forms are stored as fully antisymmetric component arrays on the basis e_a
with the determinant convention: (alpha ^ beta)_ab = alpha_a beta_b - alpha_b beta_a
and d alpha(X, Y) = X alpha(Y) - Y alpha(X) - alpha([X, Y]).
"""

import itertools
import logging
from typing import Optional, Sequence

import numpy as np

from neutral4.geometry.jets import TensorJet, einsum
from neutral4.geometry.operations import LocalGeometry
from neutral4.geometry.spec import FormField, GeometrySpec, VectorField
from neutral4.tensor.connection import christoffel_jet, nabla_vector
from neutral4.tensor.frames import OrthonormalFrame

logger = logging.getLogger(__name__)

PAIRS = tuple(itertools.combinations(range(4), 2))
# <s_1, s_1> = 2, <s_2, s_2> = <s_3, s_3> = -2 for the bivector metric of a (2,2) frame
BIVECTOR_NORMS = np.array([2.0, -2.0, -2.0])


def levi_civita() -> np.ndarray:
    eps = np.zeros((4, 4, 4, 4))
    for perm in itertools.permutations(range(4)):
        eps[perm] = np.linalg.det(np.eye(4)[list(perm)])
    return eps


LEVI_CIVITA = levi_civita()


# Bivectors ---------------------------------------------------------------


def bivector(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Contravariant components of a ^ b."""
    return np.outer(a, b) - np.outer(b, a)


def lower_bivector(g: np.ndarray, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """The 2-form (a ^ b) with both indices lowered by g."""
    ga, gb = g @ a, g @ b
    return np.outer(ga, gb) - np.outer(gb, ga)


def self_dual_basis(frame: np.ndarray) -> np.ndarray:
    """s^+_1 = E1^E2 + E3^E4, s^+_2 = E1^E3 - E4^E2, s^+_3 = E1^E4 - E2^E3."""
    e1, e2, e3, e4 = frame.T
    return np.array(
        [
            bivector(e1, e2) + bivector(e3, e4),
            bivector(e1, e3) - bivector(e4, e2),
            bivector(e1, e4) - bivector(e2, e3),
        ]
    )


def anti_self_dual_basis(frame: np.ndarray) -> np.ndarray:
    """s^-_1 = E1^E2 - E3^E4, s^-_2 = E1^E3 + E4^E2, s^-_3 = E1^E4 + E2^E3."""
    e1, e2, e3, e4 = frame.T
    return np.array(
        [
            bivector(e1, e2) - bivector(e3, e4),
            bivector(e1, e3) + bivector(e4, e2),
            bivector(e1, e4) + bivector(e2, e3),
        ]
    )


def lower(g: np.ndarray, bivectors: np.ndarray) -> np.ndarray:
    return np.einsum("ia,nab,bj->nij", g, bivectors, g)


# Hodge star --------------------------------------------------------------


def volume_form(g: np.ndarray, orientation: int = 1) -> np.ndarray:
    return orientation * np.sqrt(abs(np.linalg.det(g))) * LEVI_CIVITA


def hodge_star_2(g: np.ndarray, orientation: int, omega: np.ndarray) -> np.ndarray:
    """
    Hodge star of a 2-form: (*F)_cd = 1/2 F^ab mu_abcd.

    Args:
        g: Metric at the point
        orientation: +1 for the chart (or frame) order, -1 for the opposite
        omega: Antisymmetric 4x4 covariant components

    Returns:
        Antisymmetric 4x4 components of *omega; ** = Id in signature (2,2)
    """
    ginv = np.linalg.inv(g)
    raised = ginv @ omega @ ginv.T
    return 0.5 * np.einsum("ab,abcd->cd", raised, volume_form(g, orientation))


def hodge_matrix(g: np.ndarray, orientation: int = 1) -> np.ndarray:
    """Matrix of * on the basis dx^i ^ dx^j, i < j."""
    matrix = np.zeros((6, 6))
    for col, (i, j) in enumerate(PAIRS):
        omega = np.zeros((4, 4))
        omega[i, j], omega[j, i] = 1.0, -1.0
        star = hodge_star_2(g, orientation, omega)
        matrix[:, col] = [star[a, b] for a, b in PAIRS]
    return matrix


# Wedge products ----------------------------------------------------------


def wedge11(alpha: np.ndarray, beta: np.ndarray) -> np.ndarray:
    return np.outer(alpha, beta) - np.outer(beta, alpha)


def wedge12(theta: np.ndarray, omega: np.ndarray) -> np.ndarray:
    """(theta ^ Omega)_abc = theta_a Omega_bc - theta_b Omega_ac + theta_c Omega_ab."""
    return (
        np.einsum("a,bc->abc", theta, omega)
        - np.einsum("b,ac->abc", theta, omega)
        + np.einsum("c,ab->abc", theta, omega)
    )


def wedge22(f: np.ndarray, h: np.ndarray) -> float:
    """Coefficient of e^0 ^ e^1 ^ e^2 ^ e^3 in F ^ H."""
    return float(
        f[0, 1] * h[2, 3] - f[0, 2] * h[1, 3] + f[0, 3] * h[1, 2]
        + f[1, 2] * h[0, 3] - f[1, 3] * h[0, 2] + f[2, 3] * h[0, 1]
    )


def volume_coefficient(coframe: np.ndarray) -> float:
    """Coefficient of theta^1 ^ theta^2 ^ theta^3 ^ theta^4 for coframe rows theta^a."""
    return float(np.linalg.det(coframe))


# Exterior derivative -----------------------------------------------------


def exterior_derivative_1(alpha: TensorJet, c: np.ndarray) -> np.ndarray:
    """d alpha[a, b] = e_a alpha_b - e_b alpha_a - C^k_ab alpha_k."""
    da = alpha.d
    return da.T - da - np.einsum("kab,k->ab", c, alpha.value)


def exterior_derivative_2(beta: TensorJet, c: np.ndarray) -> np.ndarray:
    f, df = beta.value, beta.d
    return (
        np.einsum("bca->abc", df)
        - np.einsum("acb->abc", df)
        + df
        - np.einsum("kab,kc->abc", c, f)
        + np.einsum("kac,kb->abc", c, f)
        - np.einsum("kbc,ka->abc", c, f)
    )


def exterior_derivative(geom: GeometrySpec, form: FormField, p: Sequence[float]) -> np.ndarray:
    """
    Exterior derivative of a 1-form or 2-form field at a point.

    Args:
        geom: Geometry
        form: Form field of degree 1 or 2
        p: Point

    Returns:
        Components of the (k+1)-form; frame backends include the bracket terms
    """
    local = LocalGeometry(geom, p)
    jet = local.form(form, order=1)
    if form.degree == 1:
        return exterior_derivative_1(jet, local.C)
    if form.degree == 2:
        return exterior_derivative_2(jet, local.C)
    raise ValueError(f"exterior derivative of degree {form.degree} forms is not supported")


# Codifferential and divergence -------------------------------------------


def nabla_twoform(local: LocalGeometry, f: TensorJet) -> TensorJet:
    """N[a, b, c] = (nabla_{e_a} F)(e_b, e_c), one order below F."""
    gamma = christoffel_jet(local)
    return (
        f.grad().transpose(2, 0, 1)
        - einsum("mab,mc->abc", gamma, f)
        - einsum("mac,bm->abc", gamma, f)
    )


def codifferential_jet(local: LocalGeometry, f: TensorJet) -> TensorJet:
    """(delta F)_c = -g^ab (nabla_a F)_bc."""
    return einsum("ab,abc->c", local.ginv, nabla_twoform(local, f)).scale(-1.0)


def codifferential_2(
    geom: GeometrySpec,
    form: FormField,
    p: Sequence[float],
    frame: Optional[OrthonormalFrame] = None,
) -> np.ndarray:
    """
    Codifferential of a 2-form field.

    With `frame` the sum -sum_i eps_i (nabla_{E_i} F)(E_i, .) is taken over that
    orthonormal frame explicitly; otherwise the inverse metric contracts.
    """
    local = LocalGeometry(geom, p)
    f = local.form(form, order=1)
    if frame is None:
        return codifferential_jet(local, f).value
    nabla = nabla_twoform(local, f).value
    e = frame.vectors
    return -np.einsum("i,ai,bi,abc->c", frame.epsilon, e, e, nabla)


def divergence(
    geom: GeometrySpec, X: VectorField, p: Sequence[float], frame: Optional[OrthonormalFrame] = None
) -> float:
    """div X = trace(nabla X), or sum_i eps_i g(nabla_{E_i} X, E_i) over `frame`."""
    local = LocalGeometry(geom, p)
    m = nabla_vector(local, local.vector(X, order=1)).value
    if frame is None:
        return float(np.trace(m))
    e = frame.vectors
    g = local.g.value
    return float(sum(frame.epsilon[i] * (e[:, i] @ g @ (m @ e[:, i])) for i in range(4)))


def twoform_from_endomorphism(g: TensorJet, a: TensorJet) -> TensorJet:
    """Omega_A(X, Y) = g(AX, Y), i.e. Omega = A^T g."""
    return einsum("ki,kj->ij", a, g)

