"""Brute-force extrema of curvature quantities over planes and frames.

The search is the ground truth against which closed-form results are tested,
so it deliberately avoids the spectral decomposition: every value it reports
comes from evaluating the curvature form on explicitly sampled planes or
orthonormal 4-frames.

Two phases: uniform sampling (Haar frames, chunked deterministic streams),
then derivative-free hill climbing with a multiplicative step-decay schedule,
restarted from a handful of mutually distant coarse candidates.  Chunked
substreams make the result independent of how the work is scheduled.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import CurvatureOperator, Plane, biorthogonal, sectional, wedge
from .errors import ValidationError
from .numerics import RngStream, _orthonormalize_rows, random_frames, rotation_from_generator

#: Frames drawn per RNG chunk during the sampling phase.
SAMPLE_CHUNK = 2048

# Chunk indices at and above this range are reserved for the refinement stream.
_REFINE_CHUNK = 1 << 32

_PROPOSALS_PER_ITER = 4
_CANDIDATE_POOL = 200
_DIVERSITY_MIN_DIST = 0.5
_CONVERGED_RTOL = 1e-9

OBJECTIVES = ("sectional", "biorthogonal")
MODES = ("min", "max")


@dataclass(frozen=True)
class OracleConfig:
    """Search budget and determinism knobs for the brute-force oracle."""

    samples: int = 20000
    refine_iters: int = 200
    restarts: int = 3
    step_init: float = 0.3
    step_decay: float = 0.9
    seed: int = 0

    def __post_init__(self):
        if self.samples < 1:
            raise ValidationError(f"samples must be >= 1, got {self.samples}")
        if not 0.0 < self.step_decay < 1.0:
            raise ValidationError(f"step_decay must be in (0, 1), got {self.step_decay}")
        if self.step_init <= 0.0:
            raise ValidationError(f"step_init must be positive, got {self.step_init}")
        if self.refine_iters < 0 or self.restarts < 0:
            raise ValidationError("refine_iters and restarts must be nonnegative")


@dataclass(frozen=True)
class ExtremumResult:
    """An extremum estimate together with the point attaining it."""

    value: float
    witness: object  # Plane for plane objectives, (4, 4) frame for isotropic
    samples_used: int
    converged: bool


# ---------------------------------------------------------------------------
# batched objective evaluation


def _quad(m: np.ndarray, forms: np.ndarray) -> np.ndarray:
    return np.einsum("na,ab,nb->n", forms, m, forms)


def _sectional_batch(m: np.ndarray, frames: np.ndarray) -> np.ndarray:
    return _quad(m, wedge(frames[:, 0], frames[:, 1]))


def _biortho_batch(m: np.ndarray, frames: np.ndarray) -> np.ndarray:
    w01 = wedge(frames[:, 0], frames[:, 1])
    w23 = wedge(frames[:, 2], frames[:, 3])
    return (_quad(m, w01) + _quad(m, w23)) / 2.0


def _iso_batch(m: np.ndarray, frames: np.ndarray) -> np.ndarray:
    f = [frames[:, i] for i in range(4)]
    total = np.zeros(frames.shape[0])
    for i, j in ((0, 2), (0, 3), (1, 2), (1, 3)):
        total += _quad(m, wedge(f[i], f[j]))
    coupling = np.einsum("na,ab,nb->n", wedge(f[0], f[1]), m, wedge(f[2], f[3]))
    return total - 2.0 * coupling


_BATCH_OBJECTIVES = {
    "sectional": _sectional_batch,
    "biorthogonal": _biortho_batch,
    "isotropic": _iso_batch,
}


def isotropic_curvature(r: CurvatureOperator, frame: np.ndarray) -> float:
    """Frame-wise isotropic curvature
    K(f1,f3) + K(f1,f4) + K(f2,f3) + K(f2,f4) - 2 <M(f1^f2), f3^f4>."""
    frame = np.asarray(frame, dtype=float).reshape(1, 4, 4)
    return float(_iso_batch(r.matrix, frame)[0])


# ---------------------------------------------------------------------------
# perturbations


def _rotate_rows(rows: np.ndarray, rng, step: float) -> np.ndarray:
    gen = rng.generator() if isinstance(rng, RngStream) else rng
    omega = gen.standard_normal(6)
    nrm = float(np.linalg.norm(omega))
    if nrm == 0.0:  # pragma: no cover
        return np.array(rows, dtype=float)
    q = rotation_from_generator(omega / nrm * step)
    return np.asarray(rows, dtype=float) @ q.T


def perturb_frame(frame: np.ndarray, rng, step: float) -> np.ndarray:
    """Rotate a frame by a random rotation of angle at most ``step`` (radians)."""
    if step == 0.0:
        return np.array(frame, dtype=float)
    moved = _rotate_rows(frame, rng, step)[None]
    out, bad = _orthonormalize_rows(moved)
    if bad.any():  # pragma: no cover
        raise ValidationError("frame became degenerate under perturbation")
    return out[0]


def perturb_plane(p: Plane, rng, step: float) -> Plane:
    """Move a plane by a random rotation of angle at most ``step`` (radians)."""
    if step == 0.0:
        return p
    moved = _rotate_rows(np.stack([p.u, p.v]), rng, step)
    u = moved[0] / np.linalg.norm(moved[0])
    v = moved[1] - (moved[1] @ u) * u
    v /= np.linalg.norm(v)
    return Plane(u, v)


# ---------------------------------------------------------------------------
# two-phase search


def _coarse_samples(m: np.ndarray, evaluate, cfg: OracleConfig) -> tuple[np.ndarray, np.ndarray]:
    """Deterministic Haar sample frames and their raw objective values."""
    frames_parts = []
    values_parts = []
    remaining = cfg.samples
    chunk = 0
    while remaining > 0:
        # Always draw a full chunk so a larger budget extends, never reshuffles,
        # the sample stream.
        batch = random_frames(RngStream(cfg.seed, chunk), SAMPLE_CHUNK)[:remaining]
        frames_parts.append(batch)
        values_parts.append(evaluate(m, batch))
        remaining -= len(batch)
        chunk += 1
    return np.concatenate(frames_parts), np.concatenate(values_parts)


def _select_candidates(frames: np.ndarray, values: np.ndarray, count: int,
                       isotropic: bool) -> list[int]:
    """Best coarse candidates, greedily kept mutually distant so that restarts
    probe distinct regions instead of re-polishing one basin."""
    pool_size = min(_CANDIDATE_POOL, len(values))
    pool = np.argpartition(values, pool_size - 1)[:pool_size]
    pool = pool[np.argsort(values[pool], kind="stable")]
    pf = frames[pool]
    projs = np.einsum("ni,nj->nij", pf[:, 0], pf[:, 0]) + np.einsum(
        "ni,nj->nij", pf[:, 1], pf[:, 1])
    if isotropic:
        # The isotropic objective sees only the unordered split {P, P-perp}
        # plus the frame orientation, so measure distance accordingly.
        det_sign = np.sign(np.linalg.det(pf))
    chosen: list[int] = []
    for pos in range(len(pool)):
        if len(chosen) == count:
            break
        if chosen:
            dist = np.linalg.norm(projs[pos] - projs[chosen], axis=(1, 2))
            if isotropic:
                flipped = np.linalg.norm((np.eye(4) - projs[pos]) - projs[chosen], axis=(1, 2))
                dist = np.minimum(dist, flipped)
                dist[det_sign[chosen] != det_sign[pos]] = np.inf
            if dist.min() < _DIVERSITY_MIN_DIST:
                continue
        chosen.append(pos)
    for pos in range(len(pool)):  # backfill if diversity left slots empty
        if len(chosen) == count:
            break
        if pos not in chosen:
            chosen.append(pos)
    return [int(pool[pos]) for pos in chosen]


def _refine(m: np.ndarray, evaluate, sign: float, frames: np.ndarray,
            signed_values: np.ndarray, cfg: OracleConfig,
            isotropic: bool) -> tuple[float, np.ndarray, int, bool]:
    """Hill climbing from diverse coarse candidates; minimizes the signed value.

    Each restart carries its own step: multiplied by the decay factor whenever
    none of its proposals improves, and grown back (capped at the initial step)
    on success, so the step tracks the scale that still makes progress even on
    ill-conditioned objectives.  Frames stay orthonormal to around 1e-14 under
    pure rotations, so no re-orthonormalization is needed inside the loop.
    """
    if cfg.restarts == 0 or cfg.refine_iters == 0:
        best = int(np.argmin(signed_values))
        return float(signed_values[best]), frames[best], 0, False

    chosen = _select_candidates(frames, signed_values, cfg.restarts, isotropic)
    cur_frames = np.array(frames[chosen])
    cur_values = signed_values[chosen].copy()
    k = len(chosen)
    steps = np.full(k, cfg.step_init)

    gen = RngStream(cfg.seed, _REFINE_CHUNK).generator()
    history = np.empty(cfg.refine_iters)
    rows = np.arange(k)
    for it in range(cfg.refine_iters):
        omega = gen.standard_normal((k, _PROPOSALS_PER_ITER, 6))
        nrm = np.linalg.norm(omega, axis=-1, keepdims=True)
        nrm[nrm == 0.0] = 1.0
        omega /= nrm
        rots = rotation_from_generator(omega * steps[:, None, None])
        # rows of each frame rotated by Q: F' = F Q^T
        cands = np.einsum("kmj,kpij->kpmi", cur_frames, rots)
        cands = cands.reshape(k * _PROPOSALS_PER_ITER, 4, 4)
        cvals = (sign * evaluate(m, cands)).reshape(k, _PROPOSALS_PER_ITER)
        cands = cands.reshape(k, _PROPOSALS_PER_ITER, 4, 4)
        best_p = np.argmin(cvals, axis=1)
        best_vals = cvals[rows, best_p]
        improved = best_vals < cur_values
        cur_values[improved] = best_vals[improved]
        cur_frames[improved] = cands[rows, best_p][improved]
        steps[~improved] *= cfg.step_decay
        steps[improved] = np.minimum(steps[improved] / cfg.step_decay, cfg.step_init)
        history[it] = cur_values.min()

    evaluations = cfg.refine_iters * k * _PROPOSALS_PER_ITER
    window = max(1, cfg.refine_iters // 4)
    reference = history[max(0, cfg.refine_iters - window - 1)]
    converged = bool(reference - history[-1] <= _CONVERGED_RTOL * (1.0 + abs(history[-1])))

    winner = int(np.argmin(cur_values))
    return float(cur_values[winner]), cur_frames[winner], evaluations, converged


def _search(r: CurvatureOperator, objective: str, sign: float,
            cfg: OracleConfig) -> tuple[float, np.ndarray, int, bool]:
    """Minimize sign * objective; returns (value, frame, evaluations, converged)."""
    m = r.matrix
    evaluate = _BATCH_OBJECTIVES[objective]
    frames, raw = _coarse_samples(m, evaluate, cfg)
    value, frame, refine_evals, converged = _refine(
        m, evaluate, sign, frames, sign * raw, cfg, objective == "isotropic")
    return value, frame, len(raw) + refine_evals, converged


def _plane_result(sign: float, value: float, frame: np.ndarray,
                  evaluations: int, converged: bool) -> ExtremumResult:
    witness = Plane(frame[0], frame[1])
    return ExtremumResult(value=sign * value, witness=witness,
                          samples_used=evaluations, converged=converged)


def extremize(r: CurvatureOperator, objective: str, mode: str,
              cfg: OracleConfig = OracleConfig()) -> ExtremumResult:
    """Brute-force extremum of sectional or biorthogonal curvature over planes.

    The reported value is the best value actually evaluated, so in ``min``
    mode it is always an upper bound on the true minimum, attained by the
    returned witness plane.
    """
    if objective not in OBJECTIVES:
        raise ValidationError(f"objective must be one of {OBJECTIVES}, got {objective!r}")
    if mode not in MODES:
        raise ValidationError(f"mode must be one of {MODES}, got {mode!r}")
    sign = 1.0 if mode == "min" else -1.0
    value, frame, evaluations, converged = _search(r, objective, sign, cfg)
    return _plane_result(sign, value, frame, evaluations, converged)


def extremize_pair(r: CurvatureOperator, objective: str,
                   cfg: OracleConfig = OracleConfig()) -> tuple[ExtremumResult, ExtremumResult]:
    """Minimum and maximum in one call, sharing the sampling pass.

    Bit-identical to two separate :func:`extremize` calls with the same
    configuration; only the coarse evaluation work is shared.
    """
    if objective not in OBJECTIVES:
        raise ValidationError(f"objective must be one of {OBJECTIVES}, got {objective!r}")
    m = r.matrix
    evaluate = _BATCH_OBJECTIVES[objective]
    frames, raw = _coarse_samples(m, evaluate, cfg)
    results = []
    for sign in (1.0, -1.0):
        value, frame, refine_evals, converged = _refine(
            m, evaluate, sign, frames, sign * raw, cfg, isotropic=False)
        results.append(_plane_result(sign, value, frame, len(raw) + refine_evals, converged))
    return results[0], results[1]


def min_isotropic(r: CurvatureOperator, cfg: OracleConfig = OracleConfig()) -> ExtremumResult:
    """Minimum of the frame-wise isotropic curvature over orthonormal 4-frames."""
    value, frame, evaluations, converged = _search(r, "isotropic", 1.0, cfg)
    frame = np.array(frame)
    frame.flags.writeable = False
    return ExtremumResult(value=value, witness=frame,
                          samples_used=evaluations, converged=converged)


def evaluate_witness(r: CurvatureOperator, objective: str, witness) -> float:
    """Re-evaluate an oracle objective at a witness through the public path."""
    if objective == "sectional":
        return sectional(r, witness)
    if objective == "biorthogonal":
        return biorthogonal(r, witness)
    if objective == "isotropic":
        return isotropic_curvature(r, witness)
    raise ValidationError(f"unknown objective {objective!r}")
