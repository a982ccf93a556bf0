"""Phase probability distribution of the readout mode and peak analysis.

The canonical phase measurement assigns probability density

    P(theta, tau) = (1/2 pi) sum_branch sum_{n,m} e^{-i (n - m) theta}
                    Theta_nm(0, tau)

to the readout phase theta.  The spin state shows up as one or two peaks
whose separation and width quantify how reliably the measurement
distinguishes the two spin branches.

Sign convention: with this orientation an initially real readout amplitude
(beta > 0) peaks at theta = 0 and the radiation-pressure coupling drifts the
peak toward positive theta, more strongly for the lower-frequency branch.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import List, Optional, Sequence

import numpy as np
from scipy import signal
from scipy.special import gammaln

from .errors import TruncationError
from .gaussian_dynamics import CoeffKey, theta_at_origin, theta_matrix
from .model import DimensionlessParams

#: a local maximum must exceed this multiple of the uniform level 1/2pi to
#: count as a peak (configuration constant, not physics)
PEAK_PROMINENCE_FACTOR = 1.05

#: peaks whose separation/width ratio exceeds this are called resolved
RESOLVED_THRESHOLD = 1.0

#: discarded-tail bound above which the configured cutoff is rejected
TAIL_BOUND_LIMIT = 1e-8

#: tolerance on the imaginary residue of the assembled distribution
IMAG_RESIDUE_LIMIT = 1e-10


@dataclass(frozen=True)
class SystemState:
    """Initial condition: cantilever displacement, readout amplitude, spin.

    ``alpha`` displaces the thermal cantilever state (Re = mean position,
    Im = mean momentum, dimensionless); ``beta`` is the readout coherent
    amplitude; ``w_e``/``w_g`` are the spin branch populations in the
    rotated frame and must sum to one.
    """

    alpha: complex
    beta: complex
    w_e: float
    w_g: float

    def __post_init__(self):
        for name in ("w_e", "w_g"):
            v = getattr(self, name)
            if not (0.0 <= v <= 1.0):
                raise ValueError(f"{name} must lie in [0, 1], got {v!r}")
        if abs(self.w_e + self.w_g - 1.0) > 1e-12:
            raise ValueError(
                f"branch populations must sum to 1, got {self.w_e + self.w_g}")
        for name in ("alpha", "beta"):
            v = complex(getattr(self, name))
            if not (math.isfinite(v.real) and math.isfinite(v.imag)):
                raise ValueError(f"{name} must be finite")

    @classmethod
    def eigenstate(cls, branch: str, alpha: complex, beta: complex
                   ) -> "SystemState":
        """Spin prepared in a single rotated-frame branch."""
        if branch == "e":
            return cls(alpha=alpha, beta=beta, w_e=1.0, w_g=0.0)
        if branch == "g":
            return cls(alpha=alpha, beta=beta, w_e=0.0, w_g=1.0)
        raise ValueError(f"branch must be 'e' or 'g', got {branch!r}")

    @classmethod
    def superposition(cls, alpha: complex, beta: complex,
                      w_e: float = 0.5) -> "SystemState":
        """Both branches populated (equal weights by default)."""
        return cls(alpha=alpha, beta=beta, w_e=w_e, w_g=1.0 - w_e)


@dataclass(frozen=True)
class Peak:
    position: float
    height: float
    width: float
    prominence: float


@dataclass(frozen=True)
class PeakSet:
    peaks: List[Peak]

    def __len__(self):
        return len(self.peaks)

    def __iter__(self):
        return iter(self.peaks)

    def tallest(self, count: int) -> List[Peak]:
        return sorted(self.peaks, key=lambda p: -p.height)[:count]

    def as_dict(self) -> list:
        return [{"position": p.position, "height": p.height,
                 "width": p.width, "prominence": p.prominence}
                for p in self.peaks]


@dataclass
class PhaseDistribution:
    """P(theta) sampled on a uniform grid over [-pi, pi).

    ``values`` is clipped at zero for reporting; the raw assembly (which may
    carry tiny negative truncation excursions) and its diagnostics live in
    ``meta``.
    """

    thetas: np.ndarray
    values: np.ndarray
    tau: float
    meta: dict = field(default_factory=dict)

    @property
    def grid_size(self) -> int:
        return len(self.thetas)

    def integral(self) -> float:
        """Circular trapezoid integral (exact for the assembled sum)."""
        return float(self.values.mean() * 2.0 * math.pi)

    def uniform_level(self) -> float:
        return 1.0 / (2.0 * math.pi)


def default_n_max(beta: complex) -> int:
    """Readout Fock cutoff covering the coherent distribution for |beta| <= 4."""
    b = abs(beta)
    return int(math.ceil(b * b + 8.0 * b + 10.0))


def poisson_tail(beta: complex, n_max: int) -> float:
    """Discarded photon-number probability mass above the cutoff."""
    b2 = abs(beta) ** 2
    if b2 == 0.0:
        return 0.0
    n_far = max(4 * n_max, int(4 * b2) + 60)
    ns = np.arange(n_far + 1)
    logp = -b2 + ns * math.log(b2) - gammaln(ns + 1.0)
    p = np.exp(logp)
    return float(p[n_max + 1:].sum())


def amplitude_tail_bound(beta: complex, n_max: int) -> float:
    """Rigorous bound on the discarded contribution to P(theta).

    |Theta_nm| never exceeds its initial value sqrt(p_n p_m) (a consequence
    of positivity and the conserved readout photon distribution), so the
    discarded (n, m) pairs contribute at most
    (1/2 pi) [ (sum_n c_n)^2 - (sum_{n<=n_max} c_n)^2 ] with
    c_n = e^{-|b|^2/2} |b|^n / sqrt(n!).  More conservative than the plain
    Poisson tail; reported as a diagnostic.
    """
    b = abs(beta)
    if b == 0.0:
        return 0.0
    n_far = max(4 * n_max, int(4 * b * b) + 60)
    ns = np.arange(n_far + 1)
    logc = -0.5 * b * b + ns * math.log(b) - 0.5 * gammaln(ns + 1.0)
    c = np.exp(logc)
    s_all = float(c.sum())
    s_in = float(c[:n_max + 1].sum())
    return (s_all * s_all - s_in * s_in) / (2.0 * math.pi)


def _grid(grid_size: int) -> np.ndarray:
    return -math.pi + 2.0 * math.pi * np.arange(grid_size) / grid_size


def assemble_from_theta(theta_matrices: Sequence[np.ndarray],
                        grid_size: int) -> np.ndarray:
    """Complex P(theta) from Theta_nm matrices (weights already applied)."""
    thetas = _grid(grid_size)
    P = np.zeros(grid_size, dtype=complex)
    for Th in theta_matrices:
        size = Th.shape[0]
        for d in range(-(size - 1), size):
            trace_d = np.trace(Th, offset=-d)   # entries with n - m = d
            if trace_d != 0.0:
                P += np.exp(-1j * d * thetas) * trace_d
    return P / (2.0 * math.pi)


def phase_distribution(params: DimensionlessParams, state: SystemState,
                       tau: float, grid_size: int = 512,
                       n_max: Optional[int] = None,
                       method: str = "closed_form") -> PhaseDistribution:
    """Assemble P(theta, tau) from the Gaussian coefficient solution.

    ``method="ode"`` re-derives every Theta_nm by direct integration; it is
    only practical for small cutoffs and moderate branch frequencies and
    exists as a validation path.

    Raises
    ------
    TruncationError
        If the discarded-tail bound at the configured cutoff exceeds 1e-8.
    """
    if grid_size < 64:
        raise ValueError(f"grid_size must be >= 64, got {grid_size}")
    if n_max is None:
        n_max = default_n_max(state.beta)
    tail = poisson_tail(state.beta, n_max)
    if tail > TAIL_BOUND_LIMIT:
        raise TruncationError(
            f"readout cutoff n_max={n_max} leaves Poisson tail {tail:.3e} "
            f"> {TAIL_BOUND_LIMIT}")

    mats = []
    for branch, w in (("e", state.w_e), ("g", state.w_g)):
        if w == 0.0:
            continue
        if method == "closed_form":
            mats.append(theta_matrix(params, state, branch, tau, n_max))
        elif method == "ode":
            size = n_max + 1
            Th = np.zeros((size, size), dtype=complex)
            for n in range(size):
                for m in range(size):
                    key = CoeffKey(n=n, m=m, branch=branch)
                    try:
                        Th[n, m] = theta_at_origin(params, state, key, tau,
                                                   method="ode")
                    except ValueError:
                        pass   # absent entry contributes nothing
            mats.append(Th)
        else:
            raise ValueError(f"unknown method {method!r}")

    P = assemble_from_theta(mats, grid_size)
    residue = float(np.abs(P.imag).max()) if len(P) else 0.0
    raw = P.real.copy()
    values = np.clip(raw, 0.0, None)
    return PhaseDistribution(
        thetas=_grid(grid_size), values=values, tau=tau,
        meta={
            "gamma": params.gamma, "chi": params.chi, "kappa": params.kappa,
            "N_th": params.N_th,
            "alpha": [complex(state.alpha).real, complex(state.alpha).imag],
            "beta": [complex(state.beta).real, complex(state.beta).imag],
            "w_e": state.w_e, "w_g": state.w_g,
            "n_max": n_max, "tail_bound": tail,
            "amplitude_tail_bound": amplitude_tail_bound(state.beta, n_max),
            "grid_size": grid_size,
            "imag_residue": residue, "raw_min": float(raw.min()),
            "method": method,
        })


def find_peaks(dist: PhaseDistribution,
               prominence_factor: float = PEAK_PROMINENCE_FACTOR) -> PeakSet:
    """Circular local maxima above ``prominence_factor`` times the uniform level.

    Widths are measured at half prominence, in radians.  The grid is
    extended by half a period on each side so peaks at the domain seam are
    found once.
    """
    P = dist.values
    G = len(P)
    half = G // 2
    ext = np.concatenate([P[half:], P, P[:half]])
    height = prominence_factor * dist.uniform_level()
    idx, props = signal.find_peaks(ext, height=height, prominence=0.0)
    if len(idx) == 0:
        return PeakSet(peaks=[])
    widths, _, _, _ = signal.peak_widths(ext, idx, rel_height=0.5)
    keep = (idx >= half) & (idx < half + G)
    dtheta = 2.0 * math.pi / G
    peaks = [Peak(position=float(dist.thetas[(i - half) % G]),
                  height=float(ext[i]),
                  width=float(wd * dtheta),
                  prominence=float(pr))
             for i, wd, pr, k in zip(idx, widths, props["prominences"], keep)
             if k]
    return PeakSet(peaks=peaks)


def circular_separation(a: float, b: float) -> float:
    d = abs(a - b) % (2.0 * math.pi)
    return min(d, 2.0 * math.pi - d)


def distinguishability(dist: PhaseDistribution,
                       peak_set: Optional[PeakSet] = None) -> float:
    """Separation of the two tallest peaks over their mean width.

    Returns 0 when fewer than two peaks exist; values above 1 count as a
    resolved two-peak structure.
    """
    if peak_set is None:
        peak_set = find_peaks(dist)
    if len(peak_set) < 2:
        return 0.0
    p1, p2 = peak_set.tallest(2)
    sep = circular_separation(p1.position, p2.position)
    mean_width = 0.5 * (p1.width + p2.width)
    if mean_width == 0.0:
        return math.inf
    return sep / mean_width


# --------------------------------------------------------------------------
# export
# --------------------------------------------------------------------------

def format_float(x: float) -> str:
    return f"{x:.12g}"


def write_distribution_csv(dist: PhaseDistribution, path) -> None:
    """CSV with header row and (theta, P) columns, 12 significant digits."""
    lines = ["theta,P"]
    for th, p in zip(dist.thetas, dist.values):
        lines.append(f"{format_float(th)},{format_float(p)}")
    with open(path, "w", newline="") as fh:
        fh.write("\n".join(lines) + "\n")


def distribution_sidecar(dist: PhaseDistribution,
                         peak_set: Optional[PeakSet] = None) -> dict:
    if peak_set is None:
        peak_set = find_peaks(dist)
    return {
        "tau": dist.tau,
        "parameters": dist.meta,
        "integral": dist.integral(),
        "peaks": peak_set.as_dict(),
        "distinguishability": distinguishability(dist, peak_set),
    }


def write_distribution_sidecar(dist: PhaseDistribution, path,
                               extra: Optional[dict] = None) -> None:
    payload = distribution_sidecar(dist)
    if extra:
        payload.update(extra)
    with open(path, "w", newline="") as fh:
        fh.write(json.dumps(payload, indent=2, sort_keys=True) + "\n")
