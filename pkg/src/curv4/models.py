"""Benchmark curvature tensors and random curvature ensembles.

Model names, parameter arities and defaults are part of the CLI contract:

    sphere:RADIUS              round 4-sphere, M = I/R^2
    space_form:K               constant curvature K (flat/hyperbolic included)
    product_surfaces:K1,K2     product of two surfaces of curvatures K1, K2
    cp2:SCALE                  complex projective plane, holomorphic K = 4*SCALE
    r_times_s3:RADIUS          line times round 3-sphere (flat direction e4)
    flat                       zero curvature
    random_bianchi:SCALE       Gaussian symmetric 6x6, residual projected away

``product`` is accepted as shorthand for ``product_surfaces``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import CurvatureOperator, from_matrix
from .errors import ValidationError
from .numerics import RngStream

MODEL_ARITY = {
    "sphere": 1,
    "space_form": 1,
    "product_surfaces": 2,
    "cp2": 1,
    "r_times_s3": 1,
    "flat": 0,
    "random_bianchi": 1,
}

MODEL_DEFAULTS = {
    "sphere": (1.0,),
    "space_form": (1.0,),
    "product_surfaces": (1.0, 1.0),
    "cp2": (1.0,),
    "r_times_s3": (1.0,),
    "flat": (),
    "random_bianchi": (1.0,),
}

_ALIASES = {"product": "product_surfaces"}


@dataclass(frozen=True)
class ModelSpec:
    """A named model geometry with parameters (and a seed for random ones)."""

    name: str
    parameters: tuple[float, ...] | None = None
    seed: int = 0

    def __post_init__(self):
        name = _ALIASES.get(self.name, self.name)
        if name not in MODEL_ARITY:
            known = ", ".join(sorted(MODEL_ARITY))
            raise ValidationError(f"unknown model {self.name!r}; known models: {known}")
        params = self.parameters
        if params is None:
            params = MODEL_DEFAULTS[name]
        params = tuple(float(p) for p in params)
        if len(params) != MODEL_ARITY[name]:
            raise ValidationError(
                f"model {name!r} takes {MODEL_ARITY[name]} parameter(s), got {len(params)}"
            )
        object.__setattr__(self, "name", name)
        object.__setattr__(self, "parameters", params)

    def label(self) -> str:
        if self.parameters:
            return self.name + ":" + ",".join(repr(p) for p in self.parameters)
        return self.name


def parse_model_spec(text: str, seed: int = 0) -> ModelSpec:
    """Parse ``name`` or ``name:p1,p2,...`` into a :class:`ModelSpec`."""
    name, _, tail = text.partition(":")
    params = None
    if tail:
        try:
            params = tuple(float(tok) for tok in tail.split(","))
        except ValueError as exc:
            raise ValidationError(f"bad model parameters in {text!r}: {exc}") from None
    return ModelSpec(name=name.strip(), parameters=params, seed=seed)


def _require_positive(value: float, what: str) -> float:
    if not value > 0.0:
        raise ValidationError(f"{what} must be positive, got {value!r}")
    return value


def sphere(radius: float = 1.0) -> CurvatureOperator:
    """Round sphere of the given radius: every sectional curvature is 1/R^2."""
    _require_positive(radius, "radius")
    return from_matrix(np.eye(6) / radius**2)


def space_form(k: float) -> CurvatureOperator:
    """Constant sectional curvature k (positive, zero or negative)."""
    return from_matrix(k * np.eye(6))


def flat() -> CurvatureOperator:
    return from_matrix(np.zeros((6, 6)))


def product_surfaces(k1: float, k2: float) -> CurvatureOperator:
    """Product of two surfaces of Gauss curvatures k1 (plane e1,e2) and k2 (e3,e4)."""
    mat = np.zeros((6, 6))
    mat[0, 0] = k1
    mat[5, 5] = k2
    return from_matrix(mat)


# Standard complex structure used by the cp2 model: e1 -> e2, e3 -> e4.
_J = np.zeros((4, 4))
_J[1, 0] = _J[3, 2] = 1.0
_J[0, 1] = _J[2, 3] = -1.0
_J.flags.writeable = False


def cp2(scale: float = 1.0) -> CurvatureOperator:
    """Complex projective plane; at scale 1: s = 24, sectional range [1, 4].

    Components follow the constant-holomorphic-curvature formula
    R_ijkl = scale * (d_ik d_jl - d_il d_jk + J_ik J_jl - J_il J_jk + 2 J_ij J_kl).
    """
    _require_positive(scale, "scale")
    delta = np.eye(4)

    def component(i: int, j: int, k: int, l: int) -> float:
        return scale * (
            delta[i, k] * delta[j, l] - delta[i, l] * delta[j, k]
            + _J[i, k] * _J[j, l] - _J[i, l] * _J[j, k]
            + 2.0 * _J[i, j] * _J[k, l]
        )

    from .core import PAIRS

    mat = np.zeros((6, 6))
    for a, (i, j) in enumerate(PAIRS):
        for b, (k, l) in enumerate(PAIRS):
            mat[a, b] = component(i, j, k, l)
    return from_matrix(mat)


def r_times_s3(radius: float = 1.0) -> CurvatureOperator:
    """Line times round 3-sphere; the flat direction is e4."""
    _require_positive(radius, "radius")
    mat = np.zeros((6, 6))
    for idx in (0, 1, 3):  # e12, e13, e23: planes inside the sphere factor
        mat[idx, idx] = 1.0 / radius**2
    return from_matrix(mat)


def random_bianchi(rng: RngStream, scale: float = 1.0) -> CurvatureOperator:
    """Symmetric Gaussian 6x6 (entries i.i.d. with std ``scale``), residual projected."""
    _require_positive(scale, "scale")
    g = rng.generator().standard_normal((6, 6)) * scale
    sym = np.triu(g) + np.triu(g, 1).T
    return from_matrix(sym, project_bianchi=True)


def make_operator(spec: ModelSpec) -> CurvatureOperator:
    """Instantiate the operator described by a model spec."""
    name, params = spec.name, spec.parameters
    if name == "sphere":
        return sphere(*params)
    if name == "space_form":
        return space_form(*params)
    if name == "product_surfaces":
        return product_surfaces(*params)
    if name == "cp2":
        return cp2(*params)
    if name == "r_times_s3":
        return r_times_s3(*params)
    if name == "flat":
        return flat()
    if name == "random_bianchi":
        return random_bianchi(RngStream(spec.seed), *params)
    raise ValidationError(f"unknown model {name!r}")  # pragma: no cover
