"""Digital curvelet tight frame on an N x N periodic grid.

The construction is wrapping-based: the FFT of a field is multiplied by
each wedge window, the wedge support is re-indexed (wrapped) onto a small
axis-aligned rectangle, and that rectangle is inverse-FFT'd.  Squared
windows tile the full frequency grid and the re-indexing is one-to-one,
so Parseval and reconstruction are exact up to float rounding.

Scale channels of an S-scale frame:

    j = 0        isotropic low-pass (coarse), square lattice
    j = 1..S-1   directional wedges, L_j = angles_base * 2^floor((j-1)/2)
                 orientations, peak radius rho_j = N * 2^(j-S-2)
    j = S        isotropic high-pass closing the tiling between the finest
                 annulus (outer edge N/4, one-octave anti-alias guard) and
                 the corners of the grid

Fields are N x N complex arrays sampled on [0,1)^2; frequencies are
integer grid frequencies in [-N/2, N/2).  All inner products are plain
discrete l2 (no grid weights).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
import scipy.fft as spfft

from ._core import fft_workers, kernels
from .windows import WindowFamily, build_windows

__all__ = [
    "FrameParams",
    "CurveletIndex",
    "Wedge",
    "FrameTable",
    "CoeffSet",
    "MoleculeProfile",
    "build_frame",
    "analyze",
    "synthesize",
    "waveform",
    "frame_atom",
    "molecule_profile",
]


class FrameError(ValueError):
    """Invalid frame parameters or mismatched inputs."""


class UnknownIndexError(FrameError):
    """Curvelet index not present in the frame."""


@dataclass(frozen=True)
class FrameParams:
    """Geometry of a digital curvelet frame.

    Attributes:
        n: grid size, a power of two >= 32.
        scales: number of scales S counting the coarse channel; the frame
            holds S-1 directional scales plus coarse and guard channels.
        angles_base: orientation count at the first directional scale,
            divisible by 4 (full-circle count; antipodal wedges are kept
            separate, the transform is complex-valued).
        delta1, delta2: lattice density factors >= 1 applied to the
            wrapping rectangle (1 = critically sampled support box).
        smooth_step_order: window regularity parameter (C^(order-1)).
        transition: window crossover half-width in (0, 1/2].
    """

    n: int
    scales: int
    angles_base: int = 8
    delta1: float = 1.0
    delta2: float = 1.0
    smooth_step_order: int = 4
    transition: float = 0.5

    def validate(self) -> None:
        n, s = self.n, self.scales
        if n < 32 or (n & (n - 1)) != 0:
            raise FrameError(f"grid size must be a power of two >= 32, got {n}")
        if s < 1 or s > int(math.log2(n)) - 2:
            raise FrameError(f"scales must satisfy 1 <= S <= log2(N)-2, got S={s} for N={n}")
        if self.angles_base < 4 or self.angles_base % 4 != 0:
            raise FrameError(f"angles_base must be a positive multiple of 4, got {self.angles_base}")
        if self.delta1 < 1.0 or self.delta2 < 1.0:
            raise FrameError("lattice density factors must be >= 1")
        if self.smooth_step_order < 2:
            raise FrameError("smooth_step_order must be >= 2")
        if not 0.0 < self.transition <= 0.5:
            raise FrameError("transition must lie in (0, 1/2]")


@dataclass(frozen=True, order=True)
class CurveletIndex:
    """Frame subscript (j, ell, k1, k2); ell is 0 on isotropic channels."""

    j: int
    ell: int
    k1: int
    k2: int


@dataclass
class Wedge:
    """One (scale, angle) channel: window values on the grid plus wrapping geometry."""

    j: int
    ell: int
    kind: str  # "coarse" | "directional" | "guard"
    rho: float  # peak radius in grid frequencies (0 for coarse)
    theta: float  # orientation (nan for isotropic channels)
    rect: tuple[int, int]
    support: np.ndarray  # int64, flat indices into the (N, N) spectrum
    weights: np.ndarray  # float64 window values on the support
    wrapped: np.ndarray  # int64, flat indices into the rectangle
    q1: np.ndarray  # signed integer frequencies of the support
    q2: np.ndarray
    offset: int  # start of this channel in the packed coefficient vector
    atom_norm2: float

    @property
    def size(self) -> int:
        return self.rect[0] * self.rect[1]


def _fast_len(want: int, n: int) -> int:
    want = max(int(want), 1)
    side = spfft.next_fast_len(want)
    return min(side, n)


def _column_extent(primary: np.ndarray, secondary: np.ndarray) -> int:
    """Largest secondary-coordinate spread over fibers of the primary coordinate."""
    order = np.lexsort((secondary, primary))
    p, s = primary[order], secondary[order]
    starts = np.flatnonzero(np.concatenate([[True], p[1:] != p[:-1]]))
    ends = np.concatenate([starts[1:], [len(p)]])
    return int(np.max(s[ends - 1] - s[starts])) + 1


def _wrap_geometry(q1: np.ndarray, q2: np.ndarray, deltas: tuple[float, float], n: int):
    """Rectangle dims and injective wrapped positions for a wedge support.

    The support is a (possibly curved, sheared) strip of signed frequencies.
    Along its long axis the rectangle covers the full extent; across it the
    support is wrapped modulo a side just large enough to keep the map
    one-to-one, which keeps the translation lattice parabolic for tilted
    wedges.  Wrapping by construction preserves w == q - min (mod side), so
    the atoms of one channel are exact lattice translates of each other.
    """
    lo = (int(q1.min()), int(q2.min()))
    ext = (int(q1.max()) - lo[0] + 1, int(q2.max()) - lo[1] + 1)
    sec = 0 if ext[0] <= ext[1] else 1
    prim = 1 - sec
    coords = (q1 - lo[0], q2 - lo[1])
    sides = [0, 0]
    sides[prim] = _fast_len(math.ceil(ext[prim] * deltas[prim]), n)
    want = _column_extent(coords[prim], coords[sec])
    side = _fast_len(math.ceil(want * deltas[sec]), n)
    while True:
        sides[sec] = min(side, ext[sec])
        w1 = coords[0] % sides[0]
        w2 = coords[1] % sides[1]
        flat = w1 * sides[1] + w2
        if len(np.unique(flat)) == len(flat):
            return (sides[0], sides[1]), flat.astype(np.int64)
        if sides[sec] >= ext[sec]:  # bounding interval is always injective
            raise AssertionError("wrapping failed on the full bounding box")
        side = spfft.next_fast_len(side + 1)


def build_frame(params: FrameParams) -> FrameTable:
    """Precompute windows and wrapping geometry for a fixed grid.

    Raises:
        FrameError: on invalid parameters or (never in practice) a
            partition-of-unity defect above 1e-12.
    """
    params.validate()
    n, s_total = params.n, params.scales
    fam = build_windows(params.smooth_step_order, params.transition)

    q = np.fft.fftfreq(n) * n  # integer grid frequencies, fft layout
    q1 = q[:, None]
    q2 = q[None, :]
    radius = np.hypot(q1, q2)
    angle = np.arctan2(q2, q1)

    wedges: list[Wedge] = []
    accum = np.zeros((n, n))

    def add_channel(vals: np.ndarray, j: int, ell: int, kind: str, rho: float, theta: float) -> None:
        sup = np.flatnonzero(vals.ravel() > 0.0).astype(np.int64)
        if sup.size == 0:
            return
        w = vals.ravel()[sup]
        i1, i2 = np.divmod(sup, n)
        sq1 = np.where(i1 >= n // 2, i1 - n, i1)  # wedges stay clear of Nyquist
        sq2 = np.where(i2 >= n // 2, i2 - n, i2)
        rect, wrapped = _wrap_geometry(sq1, sq2, (params.delta1, params.delta2), n)
        wedges.append(
            Wedge(
                j=j,
                ell=ell,
                kind=kind,
                rho=rho,
                theta=theta,
                rect=rect,
                support=sup,
                weights=w,
                wrapped=wrapped,
                q1=sq1,
                q2=sq2,
                offset=0,
                atom_norm2=float(w @ w) / (rect[0] * rect[1]),
            )
        )
        np.add.at(accum.ravel(), sup, w * w)

    if s_total == 1:
        # Degenerate single-scale frame: one all-pass isotropic channel.
        add_channel(np.ones((n, n)), 0, 0, "coarse", 0.0, math.nan)
    else:
        rho = [n * 2.0 ** (j - s_total - 2) for j in range(s_total)]  # rho[1..S-1] used
        add_channel(fam.lowpass(radius / rho[1]), 0, 0, "coarse", 0.0, math.nan)
        for j in range(1, s_total):
            n_ang = params.angles_base * (1 << ((j - 1) // 2))
            rad = fam.radial(radius / rho[j])
            for ell in range(n_ang):
                theta0 = 2.0 * np.pi * ell / n_ang
                dtheta = np.mod(angle - theta0 + np.pi, 2.0 * np.pi) - np.pi
                vals = rad * fam.angular(n_ang * dtheta / (2.0 * np.pi))
                add_channel(vals, j, ell, "directional", rho[j], theta0)
        add_channel(fam.highpass(radius / rho[s_total - 1]), s_total, 0, "guard", n / 4.0, math.nan)

    defect = float(np.max(np.abs(accum - 1.0)))
    if defect > 1e-12:
        raise FrameError(f"window partition of unity defect {defect:.3e}")

    offset = 0
    for w in wedges:
        w.offset = offset
        offset += w.size
    return FrameTable(params=params, windows=fam, wedges=wedges, size=offset, partition_defect=defect)


@dataclass
class FrameTable:
    """Immutable precomputed frame for one grid; share freely across threads."""

    params: FrameParams
    windows: WindowFamily
    wedges: list[Wedge]
    size: int
    partition_defect: float
    _by_key: dict[tuple[int, int], Wedge] = field(default_factory=dict, repr=False)
    _pos_by_key: dict[tuple[int, int], int] = field(default_factory=dict, repr=False)

    def __post_init__(self) -> None:
        self._by_key = {(w.j, w.ell): w for w in self.wedges}
        self._pos_by_key = {(w.j, w.ell): i for i, w in enumerate(self.wedges)}

    @property
    def n(self) -> int:
        return self.params.n

    def wedge(self, j: int, ell: int = 0) -> Wedge:
        try:
            return self._by_key[(j, ell)]
        except KeyError:
            raise UnknownIndexError(f"no wedge (j={j}, ell={ell}) in this frame") from None

    def angles(self, j: int) -> int:
        """Number of orientations L_j at scale j (1 on isotropic channels)."""
        if (j, 0) not in self._by_key:
            raise UnknownIndexError(f"no scale {j} in this frame")
        return sum(1 for w in self.wedges if w.j == j)

    def directional_scales(self) -> list[int]:
        return sorted({w.j for w in self.wedges if w.kind == "directional"})

    def validate_index(self, mu: CurveletIndex) -> Wedge:
        w = self.wedge(mu.j, mu.ell)
        r1, r2 = w.rect
        if not (0 <= mu.k1 < r1 and 0 <= mu.k2 < r2):
            raise UnknownIndexError(f"translation {(mu.k1, mu.k2)} outside lattice {w.rect}")
        return w

    def center(self, mu: CurveletIndex) -> np.ndarray:
        """Spatial center x_mu in [0,1)^2."""
        w = self.validate_index(mu)
        return np.array([mu.k1 / w.rect[0], mu.k2 / w.rect[1]])

    def xi_center(self, mu: CurveletIndex) -> np.ndarray:
        """Frequency center xi_mu in grid-frequency units."""
        w = self.validate_index(mu)
        if w.kind == "directional":
            return w.rho * np.array([math.cos(w.theta), math.sin(w.theta)])
        return np.array([max(w.rho, 1.0), 0.0])

    def codirection(self, mu: CurveletIndex) -> np.ndarray:
        w = self.validate_index(mu)
        if w.kind != "directional":
            raise UnknownIndexError(f"index {mu} is not directional")
        return np.array([math.cos(w.theta), math.sin(w.theta)])

    def phase_point(self, mu: CurveletIndex):
        """Phase-space center of the index (isotropic channels are undirected)."""
        from .distance import PhasePoint

        w = self.validate_index(mu)
        return PhasePoint(
            x=self.center(mu),
            xi=self.xi_center(mu),
            directional=(w.kind == "directional"),
        )

    def index_of_flat(self, flat: np.ndarray):
        """Decode packed coefficient positions to (j, ell, k1, k2) arrays."""
        flat = np.asarray(flat, dtype=np.int64)
        offs = np.array([w.offset for w in self.wedges], dtype=np.int64)
        which = np.searchsorted(offs, flat, side="right") - 1
        j = np.empty_like(flat)
        ell = np.empty_like(flat)
        k1 = np.empty_like(flat)
        k2 = np.empty_like(flat)
        for i, w in enumerate(self.wedges):
            m = which == i
            if not np.any(m):
                continue
            rel = flat[m] - w.offset
            j[m] = w.j
            ell[m] = w.ell
            k1[m], k2[m] = np.divmod(rel, w.rect[1])
        return j, ell, k1, k2

    def flat_of_index(self, mu: CurveletIndex) -> int:
        w = self.validate_index(mu)
        return w.offset + mu.k1 * w.rect[1] + mu.k2

    def random_index(self, rng: np.random.Generator, scales=None) -> CurveletIndex:
        """Uniform random directional index, optionally restricted to given scales."""
        pool = [w for w in self.wedges if w.kind == "directional"]
        if scales is not None:
            pool = [w for w in pool if w.j in set(scales)]
        if not pool:
            raise FrameError("no directional wedges in the requested scale range")
        w = pool[rng.integers(len(pool))]
        return CurveletIndex(w.j, w.ell, int(rng.integers(w.rect[0])), int(rng.integers(w.rect[1])))


class CoeffSet:
    """Curvelet coefficients of one scalar field: per-channel complex arrays.

    Supports mapping-style access by CurveletIndex and exact l2 accounting;
    produced by :func:`analyze`, consumed by :func:`synthesize`.
    """

    def __init__(self, table: FrameTable, blocks: list[np.ndarray]):
        if len(blocks) != len(table.wedges):
            raise FrameError("coefficient blocks do not match the frame channels")
        self.table = table
        self.blocks = blocks

    @classmethod
    def zeros(cls, table: FrameTable) -> CoeffSet:
        return cls(table, [np.zeros(w.rect, dtype=np.complex128) for w in table.wedges])

    @classmethod
    def from_pairs(cls, table: FrameTable, pairs) -> CoeffSet:
        out = cls.zeros(table)
        items = pairs.items() if hasattr(pairs, "items") else pairs
        for mu, val in items:
            out[mu] = val
        return out

    def __getitem__(self, mu: CurveletIndex) -> complex:
        self.table.validate_index(mu)
        return complex(self.blocks[self._pos(mu)][mu.k1, mu.k2])

    def __setitem__(self, mu: CurveletIndex, value) -> None:
        self.table.validate_index(mu)
        self.blocks[self._pos(mu)][mu.k1, mu.k2] = value

    def _pos(self, mu: CurveletIndex) -> int:
        self.table.wedge(mu.j, mu.ell)
        return self.table._pos_by_key[(mu.j, mu.ell)]

    def pack(self) -> np.ndarray:
        return np.concatenate([b.ravel() for b in self.blocks])

    def norm2(self, kinds=None) -> float:
        """Sum of squared moduli, optionally over channels of the given kinds."""
        total = 0.0
        for w, b in zip(self.table.wedges, self.blocks):
            if kinds is None or w.kind in kinds:
                total += float(np.vdot(b, b).real)
        return total

    def nonzero_rows(self, tol: float = 0.0):
        """Arrays (j, ell, k1, k2, values) of entries with |c| > tol."""
        flat = self.pack()
        keep = np.flatnonzero(np.abs(flat) > tol)
        j, ell, k1, k2 = self.table.index_of_flat(keep)
        return j, ell, k1, k2, flat[keep]


def _check_field(table: FrameTable, f: np.ndarray) -> np.ndarray:
    f = np.asarray(f)
    if f.shape[-2:] != (table.n, table.n):
        raise FrameError(f"field shape {f.shape} does not match grid {table.n}")
    return f.astype(np.complex128, copy=False)


def analyze(table: FrameTable, f: np.ndarray) -> CoeffSet:
    """Frame coefficients of a field; exact Parseval: sum |c|^2 = sum |f|^2."""
    f = _check_field(table, f)
    if f.ndim != 2:
        raise FrameError("analyze expects a single N x N field")
    spectrum = np.ascontiguousarray(spfft.fft2(f, norm="ortho", workers=fft_workers())).ravel()
    blocks = []
    for w in table.wedges:
        buf = np.zeros(w.size, dtype=np.complex128)
        kernels.wedge_gather(spectrum, w.support, w.weights, w.wrapped, buf)
        blocks.append(spfft.ifft2(buf.reshape(w.rect), norm="ortho"))
    return CoeffSet(table, blocks)


def synthesize(table: FrameTable, coeffs) -> np.ndarray:
    """Adjoint of :func:`analyze`; synthesize(analyze(f)) reproduces f exactly."""
    if not isinstance(coeffs, CoeffSet):
        coeffs = CoeffSet.from_pairs(table, coeffs)
    n = table.n
    spectrum = np.zeros(n * n, dtype=np.complex128)
    for w, block in zip(table.wedges, coeffs.blocks):
        rect = np.ascontiguousarray(spfft.fft2(block, norm="ortho")).ravel()
        kernels.wedge_scatter(spectrum, w.support, w.weights, w.wrapped, rect)
    return spfft.ifft2(spectrum.reshape(n, n), norm="ortho", workers=fft_workers())


def frame_atom(table: FrameTable, mu: CurveletIndex) -> np.ndarray:
    """The (unnormalized) frame element phi_mu = synthesize of a unit coefficient."""
    w = table.validate_index(mu)
    n = table.n
    i1, i2 = np.divmod(w.wrapped, w.rect[1])
    phase = np.exp(-2j * np.pi * (i1 * mu.k1 / w.rect[0] + i2 * mu.k2 / w.rect[1]))
    spectrum = np.zeros(n * n, dtype=np.complex128)
    spectrum[w.support] = w.weights * phase / math.sqrt(w.size)
    return spfft.ifft2(spectrum.reshape(n, n), norm="ortho", workers=fft_workers())


def waveform(table: FrameTable, mu: CurveletIndex) -> np.ndarray:
    """Unit-l2-normalized curvelet waveform at index mu."""
    w = table.validate_index(mu)
    return frame_atom(table, mu) / math.sqrt(w.atom_norm2)


@dataclass(frozen=True)
class MoleculeProfile:
    """Fitted spatial decay and low-frequency moment diagnostics of a waveform."""

    minor_decay: float
    major_decay: float
    moment_ratio: float
    is_molecule: bool


def _axis_decay(dist: np.ndarray, mag: np.ndarray, lo: float, hi: float) -> float:
    """Fitted decay exponent of the envelope max(mag) vs distance over [lo, hi]."""
    if hi <= 1.5 * lo:
        return 0.0  # not enough range to fit (very coarse scales)
    edges = np.geomspace(lo, hi, 14)
    xs, ys = [], []
    for a, b in zip(edges[:-1], edges[1:]):
        m = (dist >= a) & (dist < b)
        if np.any(m):
            xs.append(math.sqrt(a * b))
            ys.append(float(np.max(mag[m])))
    xs, ys = np.array(xs), np.array(ys)
    keep = ys > 0
    if keep.sum() < 3:
        return 0.0
    slope = np.polyfit(np.log(xs[keep]), np.log(ys[keep]), 1)[0]
    return float(-slope)


def molecule_profile(table: FrameTable, f: np.ndarray, mu: CurveletIndex) -> MoleculeProfile:
    """Measure how curvelet-molecule-like a field is relative to index mu.

    Fits the envelope decay exponents along the rotated parabolic axes
    (minor = codirection, scaled by rho_j; major scaled by sqrt(rho_j))
    and the low-frequency moment ratio max |f^(xi)| / min(1, (1+|xi|)/rho_j)^2
    normalized by the spectral peak.

    Raises:
        FrameError: if the field is zero.
    """
    f = _check_field(table, f)
    w = table.validate_index(mu)
    peak = float(np.max(np.abs(f)))
    if peak == 0.0:
        raise FrameError("molecule profile of the zero field is undefined")
    n = table.n
    rho = max(w.rho, 1.0)
    if w.kind == "directional":
        e = np.array([math.cos(w.theta), math.sin(w.theta)])
    else:
        e = np.array([1.0, 0.0])
    x0 = table.center(mu)
    grid = np.arange(n) / n
    rel1 = np.mod(grid[:, None] - x0[0] + 0.5, 1.0) - 0.5
    rel2 = np.mod(grid[None, :] - x0[1] + 0.5, 1.0) - 0.5
    u_minor = np.abs(e[0] * rel1 + e[1] * rel2) * rho
    u_major = np.abs(-e[1] * rel1 + e[0] * rel2) * math.sqrt(rho)
    mag = np.abs(f) / peak

    span_minor = 0.35 * rho  # stay clear of the periodic image
    span_major = 0.35 * math.sqrt(rho)
    on_minor = u_major <= 1.0
    on_major = u_minor <= 1.0
    minor = _axis_decay(u_minor[on_minor], mag[on_minor], 2.0, max(span_minor, 4.0))
    major = _axis_decay(u_major[on_major], mag[on_major], 1.0, max(span_major, 2.0))

    q = np.fft.fftfreq(n) * n
    r = np.hypot(q[:, None], q[None, :])
    spec = np.abs(spfft.fft2(f, norm="ortho"))
    weight = np.minimum(1.0, (1.0 + r) / rho) ** 2
    moment_ratio = float(np.max(spec / weight) / np.max(spec))

    return MoleculeProfile(
        minor_decay=minor,
        major_decay=major,
        moment_ratio=moment_ratio,
        is_molecule=bool(minor > 1.0 and major > 1.0 and np.isfinite(moment_ratio)),
    )
