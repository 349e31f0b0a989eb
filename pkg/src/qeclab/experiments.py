"""Monte Carlo experiment harness: noisy Grover, fidelity and time sweeps,
threshold estimation, polynomial fitting, and the concatenation bound.

Shots are split into fixed-size chunks, each seeded from (seed, stream,
chunk index); chunk results are combined in chunk order, so output is
bit-identical for a given configuration regardless of the worker count.

Time-step conventions (documented here, used by every experiment):

* Grover runs count one memory-noise round on all 11 qubits per applied
  Grover operator (the figure-of-merit axis is "number of Grover gates"),
  plus one round after state preparation; gate faults hit every gate.
* Recovery cycles are one free-evolution step (memory noise on the data
  qubits) followed by the scheduled recovery: 12 layers simple-ancilla,
  20 layers Shor-FT nominal (a third syndrome round adds real noise but
  the cycle accounting stays at the nominal count).
"""
from __future__ import annotations

import math
import os
import warnings
from dataclasses import dataclass
from fractions import Fraction
from multiprocessing import Pool

import numpy as np

from .ftcircuits import (
    SHOR_FT,
    SIMPLE,
    ExtractionScheme,
    noisy_gates,
    recover,
    recovery_duration,
    steane_encode_circuit,
)
from .noise import NOISELESS, NoiseModel, sample_memory
from .pauli import PauliString
from .qcodes import repetition_bitflip, steane, steane_plus_state
from .statevec import Gate, StateVector, apply_pauli, overlap_sq

SHOT_CAP = 1_000_000
_CHUNK = 512


class SingularFitError(ValueError):
    """Least-squares system has no unique solution."""


@dataclass(frozen=True)
class ExperimentConfig:
    model: NoiseModel
    shots: int
    seed: int
    scheme: ExtractionScheme | None = None
    threads: int | None = None

    def __post_init__(self):
        if self.shots < 1:
            raise ValueError("shots must be >= 1")

    @property
    def workers(self) -> int:
        return self.threads if self.threads else (os.cpu_count() or 1)


@dataclass(frozen=True)
class CurvePoint:
    x: float
    mean: float
    stderr: float
    shots: int


@dataclass(frozen=True)
class FitResult:
    coefficients: tuple[float, ...]
    residual: float
    coef_stderr: tuple[float, ...] = ()


def default_shots(model: NoiseModel, cap: int = SHOT_CAP) -> int:
    """100 * max(1/epsilon, 1/gamma), capped; 1 for a noiseless run."""
    rates = [r for r in (model.epsilon, model.gamma) if r > 0]
    if not rates:
        return 1
    wanted = math.ceil(100.0 * max(1.0 / r for r in rates))
    if wanted > cap:
        warnings.warn(
            f"shot budget {wanted} capped at {cap}", stacklevel=2)
        return cap
    return wanted


def _binomial_stderr(mean: float, shots: int) -> float:
    return math.sqrt(max(mean * (1.0 - mean), 0.0) / shots)


def _point(x: float, total: float, shots: int) -> CurvePoint:
    mean = total / shots
    return CurvePoint(float(x), float(mean), _binomial_stderr(mean, shots), shots)


# ----------------------------------------------------------------------
# Chunked deterministic shot runner
# ----------------------------------------------------------------------

def _run_chunks(worker, args: tuple, shots: int, seed: int, stream: int,
                threads: int) -> np.ndarray:
    tasks = []
    start, idx = 0, 0
    while start < shots:
        count = min(_CHUNK, shots - start)
        tasks.append((args, (seed, stream, idx), count))
        start += count
        idx += 1
    if threads <= 1 or len(tasks) == 1:
        results = [worker(*t) for t in tasks]
    else:
        with Pool(processes=threads) as pool:
            results = pool.starmap(worker, tasks, chunksize=1)
    total = results[0].astype(np.float64)
    for r in results[1:]:
        total = total + r
    return total


# ----------------------------------------------------------------------
# Grover search under depolarizing noise
# ----------------------------------------------------------------------

# 11-qubit layout: database 0-4, oracle target 5 (held in |0>-|1>),
# Toffoli ancillas 6-9, one extra work qubit 10 for the inversion stage
# (which reuses ancilla 6 as its second work qubit).
_GROVER_N = 11

_GROVER_PREP = (
    (Gate.x(5),),
    tuple(Gate.h(q) for q in range(6)),
)

# the Grover operator factors into oracle, Hadamard, inversion about
# zero, Hadamard; each factor is one time step of free evolution for
# the whole register
_GROVER_STAGES = (
    (   # oracle: inversion about the searched state via the Toffoli chain
        (Gate.toffoli(0, 1, 6),),
        (Gate.toffoli(2, 6, 7),),
        (Gate.toffoli(3, 7, 8),),
        (Gate.toffoli(4, 8, 9),),
        (Gate.cnot(9, 5),),
        (Gate.toffoli(4, 8, 9),),
        (Gate.toffoli(3, 7, 8),),
        (Gate.toffoli(2, 6, 7),),
        (Gate.toffoli(0, 1, 6),),
    ),
    (tuple(Gate.h(q) for q in range(5)),),
    (   # inversion about |0>: X-conjugated multi-controlled Z
        tuple(Gate.x(q) for q in range(5)),
        (Gate.toffoli(0, 1, 10), Gate.toffoli(2, 3, 6)),
        (Gate.mcz((10, 6), 4),),
        (Gate.toffoli(0, 1, 10), Gate.toffoli(2, 3, 6)),
        tuple(Gate.x(q) for q in range(5)),
    ),
    (tuple(Gate.h(q) for q in range(5)),),
)


def _memory_round(state: StateVector, model: NoiseModel, rng) -> None:
    for ev in sample_memory(state.n, None, model, rng):
        apply_pauli(state, ev.pauli)


def _searched_probability(state: StateVector) -> float:
    # database qubits are the top 5 bits: block 31 of 32
    block = state.amps[31 << 6:]
    return float(np.sum(np.abs(block) ** 2))


def _grover_chunk(args, seed_key, count) -> np.ndarray:
    epsilon, gamma, iterations = args
    model = NoiseModel(epsilon, gamma)
    rng = np.random.default_rng(seed_key)
    acc = np.zeros(iterations + 1, dtype=np.float64)
    for _ in range(count):
        state = StateVector.zero_state(_GROVER_N)
        for layer in _GROVER_PREP:
            noisy_gates(state, layer, model, rng)
        _memory_round(state, model, rng)
        acc[0] += _searched_probability(state)
        for k in range(1, iterations + 1):
            for stage in _GROVER_STAGES:
                for layer in stage:
                    noisy_gates(state, layer, model, rng)
                _memory_round(state, model, rng)
            acc[k] += _searched_probability(state)
    return acc


def run_grover(config: ExperimentConfig, iterations: int = 45) -> list[CurvePoint]:
    """Probability of the searched state |11111> after k Grover operators."""
    args = (config.model.epsilon, config.model.gamma, iterations)
    shots = 1 if config.model.silent else config.shots
    acc = _run_chunks(_grover_chunk, args, shots, config.seed, 11, config.workers)
    return [_point(k, acc[k], shots) for k in range(iterations + 1)]


def grover_ideal_probability(k: int, database_bits: int = 5) -> float:
    """sin^2((2k+1) * arcsin(2^(-bits/2))), the noiseless law."""
    theta = math.asin(math.sqrt(1.0 / (1 << database_bits)))
    return math.sin((2 * k + 1) * theta) ** 2


# ----------------------------------------------------------------------
# Fidelity sweep after noisy encoding (one recovery step)
# ----------------------------------------------------------------------

_plus_cache: dict[str, np.ndarray] = {}


def _plus_amps() -> np.ndarray:
    amps = _plus_cache.get("plus")
    if amps is None:
        amps = steane_plus_state().amps
        _plus_cache["plus"] = amps
    return amps


def _fidelity_chunk(args, seed_key, count) -> np.ndarray:
    epsilon, gamma, scheme_kind, correction_noisy = args
    model = NoiseModel(epsilon, gamma)
    scheme = SIMPLE if scheme_kind == "SIMPLE" else SHOR_FT
    correction_model = model if correction_noisy else NOISELESS
    rng = np.random.default_rng(seed_key)
    code = steane()
    encoder = steane_encode_circuit()
    target = StateVector(7, _plus_amps())
    acc = np.zeros(1, dtype=np.float64)
    for _ in range(count):
        state = StateVector.zero_state(7)
        encoder.run(state, model, rng)
        state = recover(state, code, scheme, correction_model, rng)
        acc[0] += overlap_sq(state, target)
    return acc


def fidelity_sweep(config: ExperimentConfig, epsilons, gamma: float,
                   scheme: ExtractionScheme,
                   correction_noisy: bool) -> list[CurvePoint]:
    """Mean fidelity of encode-then-correct versus the memory rate."""
    points = []
    for i, eps in enumerate(epsilons):
        args = (float(eps), float(gamma), scheme.kind, bool(correction_noisy))
        acc = _run_chunks(_fidelity_chunk, args, config.shots,
                          config.seed, 20 + i, config.workers)
        points.append(_point(eps, acc[0], config.shots))
    return points


# ----------------------------------------------------------------------
# Bit-flip-only channel variants (analytic anchors)
# ----------------------------------------------------------------------

def _bitflip_unencoded_chunk(args, seed_key, count) -> np.ndarray:
    (epsilon,) = args
    rng = np.random.default_rng(seed_key)
    flips = rng.random(count) < epsilon
    return np.array([count - int(flips.sum())], dtype=np.float64)


def bitflip_fidelity_unencoded(epsilon: float, shots: int, seed: int,
                               threads: int = 1) -> CurvePoint:
    """|0> through a bit-flip channel: fidelity 1 - epsilon."""
    acc = _run_chunks(_bitflip_unencoded_chunk, (float(epsilon),), shots,
                      seed, 30, threads)
    return _point(epsilon, acc[0], shots)


def _bitflip_rep3_chunk(args, seed_key, count) -> np.ndarray:
    (epsilon,) = args
    rng = np.random.default_rng(seed_key)
    code = repetition_bitflip()
    zero = code.logical_zero()
    acc = np.zeros(1, dtype=np.float64)
    for _ in range(count):
        state = zero.copy()
        flips = rng.random(3) < epsilon
        for q in range(3):
            if flips[q]:
                apply_pauli(state, PauliString.single(3, q, "X"))
        state = recover(state, code, SIMPLE, NOISELESS, rng)
        acc[0] += overlap_sq(state, zero)
    return acc


def bitflip_fidelity_rep3(epsilon: float, shots: int, seed: int,
                          threads: int = 1) -> CurvePoint:
    """Logical |0> of the repetition code with perfect recovery."""
    acc = _run_chunks(_bitflip_rep3_chunk, (float(epsilon),), shots,
                      seed, 31, threads)
    return _point(epsilon, acc[0], shots)


def rep3_encoded_fidelity_law(epsilon: float) -> float:
    return (1 - epsilon) ** 3 + 3 * epsilon * (1 - epsilon) ** 2


# ----------------------------------------------------------------------
# Fidelity versus time with periodic recovery
# ----------------------------------------------------------------------

def _time_sweep_chunk(args, seed_key, count) -> np.ndarray:
    epsilon, gamma, scheme_kind, cycles = args
    model = NoiseModel(epsilon, gamma)
    scheme = SIMPLE if scheme_kind == "SIMPLE" else SHOR_FT
    rng = np.random.default_rng(seed_key)
    code = steane()
    target = StateVector(7, _plus_amps())
    acc = np.zeros(cycles, dtype=np.float64)
    for _ in range(count):
        state = StateVector(7, _plus_amps().copy())
        for c in range(cycles):
            _memory_round(state, model, rng)      # one free-evolution step
            state = recover(state, code, scheme, model, rng)
            acc[c] += overlap_sq(state, target)
    return acc


def time_sweep(config: ExperimentConfig, steps: int,
               scheme: ExtractionScheme) -> list[CurvePoint]:
    """Fidelity of a perfectly encoded qubit under periodic noisy recovery.

    One cycle is a free-evolution step plus the recovery block; points are
    reported at the nominal cycle boundaries.
    """
    cycle = 1 + recovery_duration(scheme)
    cycles = max(1, steps // cycle)
    args = (config.model.epsilon, config.model.gamma, scheme.kind, cycles)
    stream = 40 if scheme.kind == "SIMPLE" else 41
    acc = _run_chunks(_time_sweep_chunk, args, config.shots,
                      config.seed, stream, config.workers)
    return [_point((c + 1) * cycle, acc[c], config.shots) for c in range(cycles)]


def p_unencoded(eta: float, t: int) -> float:
    """Uncorrectable-error probability of a bare qubit after t steps."""
    if not 0.0 <= eta <= 1.0:
        raise ValueError("eta must be in [0, 1]")
    return 1.0 - (1.0 - 2.0 * eta / 3.0) ** t


def unencoded_fidelity_curve(eta: float, steps: int) -> list[CurvePoint]:
    return [CurvePoint(t, (1.0 - 2.0 * eta / 3.0) ** t, 0.0, 0)
            for t in range(1, steps + 1)]


# ----------------------------------------------------------------------
# Threshold estimation
# ----------------------------------------------------------------------

def _threshold_chunk(args, seed_key, count) -> np.ndarray:
    eta, scheme_kind = args
    model = NoiseModel(eta, eta)
    scheme = SIMPLE if scheme_kind == "SIMPLE" else SHOR_FT
    rng = np.random.default_rng(seed_key)
    code = steane()
    target = StateVector(7, _plus_amps())
    failures = 0
    for _ in range(count):
        state = StateVector(7, _plus_amps().copy())
        _memory_round(state, model, rng)
        state = recover(state, code, scheme, model, rng)
        # ideal decode before scoring: only logical damage counts
        state = recover(state, code, SIMPLE, NOISELESS, rng)
        if overlap_sq(state, target) < 1.0 - 1e-6:
            failures += 1
    return np.array([failures], dtype=np.float64)


@dataclass
class ThresholdResult:
    etas: tuple[float, ...]
    p1_12: list[CurvePoint]
    p1_20: list[CurvePoint]
    p2: list[CurvePoint]
    p3: list[CurvePoint]
    fit_a: float
    fit_a_stderr: float
    eta_star: float
    threshold: float
    linear_check: FitResult


def threshold_experiment(config: ExperimentConfig, etas,
                         shots_by_eta=None) -> ThresholdResult:
    """Uncorrectable-error probabilities versus eta = epsilon = gamma.

    P2 uses the simple-ancilla recovery (12 steps per cycle), P3 the
    Shor-FT recovery (20 steps). P3 is fitted as a*eta^2 through the
    origin; the crossing with the unencoded line 40*eta/3 sits at
    eta* = 40/(3a) and the stronger threshold at 1/a.
    """
    etas = tuple(float(e) for e in etas)
    if shots_by_eta is None:
        shots_by_eta = [
            min(config.shots, default_shots(NoiseModel(e, e))) for e in etas
        ]
    p2, p3 = [], []
    for i, eta in enumerate(etas):
        shots = shots_by_eta[i]
        acc2 = _run_chunks(_threshold_chunk, (eta, "SIMPLE"), shots,
                           config.seed, 50 + 2 * i, config.workers)
        acc3 = _run_chunks(_threshold_chunk, (eta, "SHOR_FT"), shots,
                           config.seed, 51 + 2 * i, config.workers)
        p2.append(_point(eta, acc2[0], shots))
        p3.append(_point(eta, acc3[0], shots))
    p1_12 = [CurvePoint(e, p_unencoded(e, 12), 0.0, 0) for e in etas]
    p1_20 = [CurvePoint(e, p_unencoded(e, 20), 0.0, 0) for e in etas]

    usable = [pt for pt in p3 if pt.shots > 0]
    if len(usable) < 2:
        raise SingularFitError("need at least two P3 points")
    a, a_err = _fit_quadratic_origin(p3)
    if a <= 0:
        raise SingularFitError("quadratic fit collapsed to a <= 0")
    linear_check = fit_polynomial(
        [(pt.x, pt.mean, _fit_weight(pt)) for pt in p3], degree=2,
        include_constant=False)
    return ThresholdResult(
        etas=etas, p1_12=p1_12, p1_20=p1_20, p2=p2, p3=p3,
        fit_a=a, fit_a_stderr=a_err,
        eta_star=40.0 / (3.0 * a), threshold=1.0 / a,
        linear_check=linear_check,
    )


def _fit_weight(pt: CurvePoint) -> float:
    # binomial variance floored at the one-event scale to keep weights finite
    var = max(pt.mean * (1.0 - pt.mean), 1.0 / pt.shots) / pt.shots
    return 1.0 / var


def _fit_quadratic_origin(points: list[CurvePoint]) -> tuple[float, float]:
    """Weighted fit of y = a x^2; returns (a, stderr of a)."""
    num = den = 0.0
    for pt in points:
        w = _fit_weight(pt)
        num += w * pt.x ** 2 * pt.mean
        den += w * pt.x ** 4
    if den == 0.0:
        raise SingularFitError("degenerate quadratic fit")
    return num / den, math.sqrt(1.0 / den)


# ----------------------------------------------------------------------
# Weighted polynomial fit
# ----------------------------------------------------------------------

def fit_polynomial(points, degree: int,
                   include_constant: bool = True) -> FitResult:
    """Weighted least squares for ascending-degree coefficients.

    ``points`` are (x, y, weight) triples with weight = 1/stderr^2.
    With include_constant=False the polynomial starts at degree 1.
    """
    pts = [(float(x), float(y), float(w)) for x, y, w in points]
    lo = 0 if include_constant else 1
    n_coef = degree + 1 - lo
    if len(pts) < n_coef:
        raise SingularFitError("not enough points for the requested degree")
    x = np.array([p[0] for p in pts])
    y = np.array([p[1] for p in pts])
    w = np.array([p[2] for p in pts])
    # fit against x/scale to keep the Vandermonde system well conditioned
    scale = float(np.max(np.abs(x))) or 1.0
    xs = x / scale
    design = np.vstack([xs ** d for d in range(lo, degree + 1)]).T
    sw = np.sqrt(w)
    a_mat = design * sw[:, None]
    b_vec = y * sw
    gram = a_mat.T @ a_mat
    try:
        if np.linalg.cond(gram) > 1e12:
            raise SingularFitError("singular normal equations")
        cov = np.linalg.inv(gram)
    except np.linalg.LinAlgError as exc:
        raise SingularFitError("singular normal equations") from exc
    coef = cov @ (a_mat.T @ b_vec)
    fitted = design @ coef
    residual = float(np.sum(w * (y - fitted) ** 2))
    powers = np.arange(lo, degree + 1)
    coef = coef / scale ** powers
    errs = np.sqrt(np.maximum(np.diag(cov), 0.0)) / scale ** powers
    coefficients = tuple(float(c) for c in coef)
    stderr = tuple(float(s) for s in errs)
    if not include_constant:
        coefficients = (0.0, *coefficients)
        stderr = (0.0, *stderr)
    return FitResult(coefficients, residual, stderr)


# ----------------------------------------------------------------------
# Concatenation bound
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class ConcatenationBound:
    bound: float | Fraction
    big_c: int
    threshold: Fraction


def concatenation_bound(n: int, t: int, eta, level: int) -> ConcatenationBound:
    """First-level pair count C(n,2) and the bound (1/C)(C*eta)^(2^L)."""
    if t != 1:
        raise ValueError("only the single-error case t = 1 is supported")
    if level < 1:
        raise ValueError("level must be >= 1")
    if not 0 <= eta < 1:
        raise ValueError("eta must be in [0, 1)")
    big_c = math.comb(n, 2)
    power = 1 << level
    if isinstance(eta, Fraction):
        bound = Fraction(1, big_c) * (big_c * eta) ** power
    else:
        bound = (1.0 / big_c) * (big_c * float(eta)) ** power
    return ConcatenationBound(bound=bound, big_c=big_c,
                              threshold=Fraction(1, big_c))


# ----------------------------------------------------------------------
# CSV output
# ----------------------------------------------------------------------

def write_csv(fh, points, header_lines=(), fit_lines=()) -> None:
    """Deterministic delimited output: config echo, points, fit comments."""
    for line in header_lines:
        fh.write(f"# {line}\n")
    fh.write("x,mean,stderr,shots\n")
    for pt in points:
        fh.write(f"{pt.x!r},{pt.mean!r},{pt.stderr!r},{pt.shots}\n")
    for line in fit_lines:
        fh.write(f"# {line}\n")
