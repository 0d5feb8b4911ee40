"""Exact propagation in a truncated three-mode Fock basis.

This is the non-perturbative validation oracle.  The state evolves by the
z-ordered exponential of +i G(z)/hbar with

    G/hbar = -k a b1^ - gamma_nl b1^2 b2^ exp(i dk z) + H.c.

The sign convention reproduces the closed-form linear-coupler solution
(f1, f2) in the gamma_nl = 0 limit.  z-ordering is handled by midpoint
sampling of G per step; the per-step matrix exponential acts on the state
through a truncation-controlled Taylor sum (the hot kernel).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ExcessiveTruncationLoss, NonConvergence
from .kernels import apply_generator as _apply_kernel
from .params import CoherentInputs, CouplerParams

# Per-mode probability mass that may be lost to truncation before the
# state (or a propagation) is rejected as unreliable.
TRUNCATION_LOSS_LIMIT = 1e-6

# Relative size at which a Taylor term is considered converged; the terms
# decay factorially once the substep norm is <= 1, so the tail is of the
# same order as the last kept term.
_TAYLOR_TERM_TOL = 1e-16
_TAYLOR_MAX_TERMS = 300

DEFAULT_ORACLE_TOL = 1e-9
DEFAULT_MAX_STEPS = 1 << 16


@dataclass(frozen=True)
class TruncationSpec:
    """Per-mode occupation cutoffs (0..max inclusive)."""

    n_a_max: int
    n_b1_max: int
    n_b2_max: int
    max_dimension: int = 4_000_000

    def __post_init__(self):
        if min(self.n_a_max, self.n_b1_max, self.n_b2_max) < 1:
            raise ValueError("every cutoff must be >= 1")
        if self.dimension > self.max_dimension:
            raise ValueError(
                f"basis dimension {self.dimension} exceeds the memory guard "
                f"({self.max_dimension})"
            )

    @property
    def shape(self) -> tuple[int, int, int]:
        return (self.n_a_max + 1, self.n_b1_max + 1, self.n_b2_max + 1)

    @property
    def dimension(self) -> int:
        da, d1, d2 = self.shape
        return da * d1 * d2


@dataclass(frozen=True)
class FockStateVector:
    """Amplitudes over the truncated basis, row-major in (n_a, n_b1, n_b2)."""

    amplitudes: np.ndarray
    truncation: TruncationSpec
    norm_deficit: float = 0.0

    def grid(self) -> np.ndarray:
        """3-D view of the amplitude vector."""
        return self.amplitudes.reshape(self.truncation.shape)


@dataclass(frozen=True)
class PropagationReport:
    final_state: FockStateVector
    steps_used: int
    norm_drift: float
    conservation_drift: float


class _Workspace:
    """Precomputed occupation tables for one truncation."""

    def __init__(self, truncation: TruncationSpec):
        da, d1, d2 = truncation.shape
        self.shape = (da, d1, d2)
        self.sa = np.sqrt(np.arange(da, dtype=float))
        self.s1 = np.sqrt(np.arange(d1, dtype=float))
        self.s2 = np.sqrt(np.arange(d2, dtype=float))
        j = np.arange(d1, dtype=float)
        self.w1 = np.sqrt((j + 1.0) * (j + 2.0))
        na, n1, n2 = np.ogrid[0:da, 0:d1, 0:d2]
        self.number_a = na.astype(float)
        self.number_b1 = n1.astype(float)
        self.number_b2 = n2.astype(float)

    def norm_bound(self, k: complex, gamma_nl: complex) -> float:
        """Upper bound on the operator norm of G(z)/hbar (z-independent)."""
        da, d1, d2 = self.shape
        lin = 2.0 * abs(k) * math.sqrt((da - 1) * d1)
        nl = 2.0 * abs(gamma_nl) * self.w1[-1] * math.sqrt(d2 - 1)
        return lin + nl


def _coherent_amplitudes(mu: complex, n_max: int) -> tuple[np.ndarray, float]:
    """Truncated coherent expansion and its tail probability."""
    c = np.empty(n_max + 1, dtype=complex)
    c[0] = math.exp(-abs(mu) ** 2 / 2.0)
    for n in range(1, n_max + 1):
        c[n] = c[n - 1] * mu / math.sqrt(n)
    tail = 1.0 - float(np.sum(np.abs(c) ** 2))
    return c, max(tail, 0.0)


def build_coherent_state(
    inputs: CoherentInputs, truncation: TruncationSpec
) -> FockStateVector:
    """Tensor product of truncated coherent expansions, renormalized."""
    mus = (inputs.alpha, inputs.beta, inputs.gamma)
    maxes = (truncation.n_a_max, truncation.n_b1_max, truncation.n_b2_max)
    vecs = []
    kept_mass = 1.0
    for mode, (mu, n_max) in enumerate(zip(mus, maxes)):
        c, tail = _coherent_amplitudes(complex(mu), n_max)
        if tail > TRUNCATION_LOSS_LIMIT:
            raise ExcessiveTruncationLoss(
                f"mode {('a', 'b1', 'b2')[mode]} tail probability {tail:.3e} "
                f"exceeds {TRUNCATION_LOSS_LIMIT:.0e} at cutoff {n_max}"
            )
        kept_mass *= 1.0 - tail
        vecs.append(c)
    psi = np.einsum("i,j,k->ijk", *vecs).ravel()
    psi /= np.linalg.norm(psi)
    return FockStateVector(
        amplitudes=psi, truncation=truncation, norm_deficit=1.0 - kept_mass
    )


def _generator_action(ws, k, gamma_nl, delta_k, z, x, out):
    neg_g = -complex(gamma_nl) * np.exp(1j * delta_k * z)
    return _apply_kernel(x, out, -complex(k), neg_g, ws.sa, ws.s1, ws.s2, ws.w1)


def apply_generator(
    params: CouplerParams, z: float, state: FockStateVector
) -> FockStateVector:
    """Return (G(z)/hbar) applied to the state (not normalized)."""
    ws = _Workspace(state.truncation)
    x = np.ascontiguousarray(state.grid())
    out = np.empty_like(x)
    _generator_action(ws, params.k, params.gamma_nl, params.delta_k, z, x, out)
    return FockStateVector(
        amplitudes=out.ravel(), truncation=state.truncation, norm_deficit=0.0
    )


def _expm_step(ws, k, gamma_nl, delta_k, z_mid, dz, psi, bound):
    """psi <- exp(i dz G(z_mid)/hbar) psi via a substepped Taylor sum."""
    substeps = max(1, math.ceil(abs(dz) * bound))
    factor = 1j * dz / substeps
    term = np.empty_like(psi)
    scratch = np.empty_like(psi)
    for _ in range(substeps):
        total = psi.copy()
        np.copyto(term, psi)
        for order in range(1, _TAYLOR_MAX_TERMS + 1):
            _generator_action(ws, k, gamma_nl, delta_k, z_mid, term, scratch)
            term, scratch = scratch, term
            term *= factor / order
            total += term
            if np.linalg.norm(term.ravel()) <= _TAYLOR_TERM_TOL * np.linalg.norm(
                total.ravel()
            ):
                break
        else:
            raise NonConvergence("Taylor exponential did not converge")
        np.copyto(psi, total)
    return psi


def _expectations(ws, psi):
    p = np.abs(psi) ** 2
    return (
        float(np.sum(ws.number_a * p)),
        float(np.sum(ws.number_b1 * p)),
        float(np.sum(ws.number_b2 * p)),
    )


def _boundary_mass(psi) -> float:
    p = np.abs(psi) ** 2
    return float(np.sum(p[-1, :, :]) + np.sum(p[:, -1, :]) + np.sum(p[:, :, -1]))


def _run_fixed(ws, k, gamma_nl, delta_k, z_final, psi0, n_steps, bound):
    psi = psi0.copy()
    dz = z_final / n_steps
    for step in range(n_steps):
        z_mid = (step + 0.5) * dz
        psi = _expm_step(ws, k, gamma_nl, delta_k, z_mid, dz, psi, bound)
    return psi


def _propagate_raw(
    k: complex,
    gamma_nl: complex,
    delta_k: float,
    inputs: CoherentInputs,
    z_final: float,
    truncation: TruncationSpec,
    tol: float = DEFAULT_ORACLE_TOL,
    max_steps: int = DEFAULT_MAX_STEPS,
    initial_steps: int = 8,
    fixed_steps: int | None = None,
) -> PropagationReport:
    if z_final < 0:
        raise ValueError("z_final must be non-negative")
    state0 = build_coherent_state(inputs, truncation)
    ws = _Workspace(truncation)
    psi0 = state0.grid().copy()
    n0 = _expectations(ws, psi0)

    if z_final == 0:
        return PropagationReport(
            final_state=state0, steps_used=1, norm_drift=0.0, conservation_drift=0.0
        )

    bound = ws.norm_bound(k, gamma_nl)
    if fixed_steps is not None:
        psi = _run_fixed(ws, k, gamma_nl, delta_k, z_final, psi0, fixed_steps, bound)
        steps = fixed_steps
    else:
        steps = max(1, initial_steps)
        psi = _run_fixed(ws, k, gamma_nl, delta_k, z_final, psi0, steps, bound)
        prev_nb2 = _expectations(ws, psi)[2]
        while True:
            if 2 * steps > max_steps:
                raise NonConvergence(
                    f"<N_b2> did not converge to {tol:.1e} within "
                    f"{max_steps} midpoint steps"
                )
            steps *= 2
            psi = _run_fixed(ws, k, gamma_nl, delta_k, z_final, psi0, steps, bound)
            nb2 = _expectations(ws, psi)[2]
            if abs(nb2 - prev_nb2) < tol:
                break
            prev_nb2 = nb2

    leak = _boundary_mass(psi)
    if leak > TRUNCATION_LOSS_LIMIT:
        raise ExcessiveTruncationLoss(
            f"boundary-occupation probability {leak:.3e} exceeds "
            f"{TRUNCATION_LOSS_LIMIT:.0e}; increase the cutoffs"
        )
    na, n1, n2 = _expectations(ws, psi)
    na0, n10, n20 = n0
    final = FockStateVector(
        amplitudes=psi.ravel(), truncation=truncation, norm_deficit=state0.norm_deficit
    )
    return PropagationReport(
        final_state=final,
        steps_used=steps,
        norm_drift=abs(float(np.linalg.norm(psi.ravel())) - 1.0),
        conservation_drift=abs((na + n1 + 2 * n2) - (na0 + n10 + 2 * n20)),
    )


def propagate(
    params: CouplerParams,
    inputs: CoherentInputs,
    z_final: float,
    truncation: TruncationSpec,
    tol: float = DEFAULT_ORACLE_TOL,
    max_steps: int = DEFAULT_MAX_STEPS,
    fixed_steps: int | None = None,
) -> PropagationReport:
    """Propagate the coherent input to z_final with step doubling until
    successive <N_b2> values differ by less than tol."""
    return _propagate_raw(
        params.k,
        params.gamma_nl,
        params.delta_k,
        inputs,
        z_final,
        truncation,
        tol=tol,
        max_steps=max_steps,
        fixed_steps=fixed_steps,
    )


def mode_expectations(state: FockStateVector) -> tuple[float, float, float]:
    """(<N_a>, <N_b1>, <N_b2>) of a Fock state vector."""
    ws = _Workspace(state.truncation)
    return _expectations(ws, state.grid())


def oracle_zeno_parameter(
    params: CouplerParams,
    inputs: CoherentInputs,
    z_final: float,
    truncation: TruncationSpec,
    tol: float = DEFAULT_ORACLE_TOL,
    max_steps: int = DEFAULT_MAX_STEPS,
) -> float:
    """Exact Zeno parameter: <N_b2> difference between the full system and
    the probe-free reference (k=0, alpha=0)."""
    full = _propagate_raw(
        params.k, params.gamma_nl, params.delta_k, inputs, z_final, truncation,
        tol=tol, max_steps=max_steps,
    )
    ref_inputs = CoherentInputs(alpha=0.0, beta=inputs.beta, gamma=inputs.gamma)
    ref = _propagate_raw(
        0.0, params.gamma_nl, params.delta_k, ref_inputs, z_final, truncation,
        tol=tol, max_steps=max_steps,
    )
    return mode_expectations(full.final_state)[2] - mode_expectations(ref.final_state)[2]
