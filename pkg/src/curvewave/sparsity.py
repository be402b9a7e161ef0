"""Curvelet matrices of operators and their sparsity/organization metrics.

A matrix column is analyze(op(phi_mu')) thresholded at a fraction of its
norm.  Reports quantify sorted-entry decay (fitted power), l^p quasi-norms,
and concentration of energy in omega-balls around the Hamiltonian-flowed
column index (minimized over flow branches, matching the shifted-diagonal
organization of the curvelet matrix).
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.stats import theilslopes

from .distance import PhasePoint, omega
from .flow import VelocityModel, flow, FlowState, normalize_branch
from .frame import CoeffSet, CurveletIndex, FrameTable, analyze, frame_atom
from .propagators import BRANCHES, OperatorSpec, polarization_fractions, hyper_curvelet, apply_acoustic

__all__ = [
    "MatrixColumn",
    "SparseOperatorMatrix",
    "DecayReport",
    "curvelet_column",
    "build_matrix",
    "decay_report",
    "truncation_error",
    "polarization_split",
    "comoving_branch",
]

DEFAULT_THRESHOLD = 1e-7


def comoving_branch(op: OperatorSpec) -> int:
    """Flow branch transporting the packets of a one-way operator.

    With the e^{+2 pi i q x} transform convention, the multiplier
    exp(sign i c|xi| t) moves a packet along -sign * e_mu, i.e. along the
    Hamiltonian branch -sign.
    """
    if op.kind in {"halfwave", "variable-wave"}:
        return -op.sign
    return 0


@dataclass
class MatrixColumn:
    """Thresholded column E(.; mu', nu') with bookkeeping for reports."""

    col_index: CurveletIndex
    col_component: int
    rows_flat: np.ndarray  # packed coefficient positions
    row_component: np.ndarray  # component nu per entry (0 for scalar ops)
    values: np.ndarray
    energy: float  # pre-threshold column energy
    threshold: float

    @property
    def nnz(self) -> int:
        return len(self.values)

    def kept_energy(self) -> float:
        return float(np.sum(np.abs(self.values) ** 2))


def _threshold_coeffs(cs: CoeffSet, thresh: float):
    flat = cs.pack()
    keep = np.flatnonzero(np.abs(flat) >= thresh)
    return keep.astype(np.int64), flat[keep]


def curvelet_column(
    table: FrameTable,
    op: OperatorSpec,
    mu: CurveletIndex,
    component: int = 0,
    threshold: float = DEFAULT_THRESHOLD,
) -> MatrixColumn:
    """One curvelet-matrix column: analyze the operator's action on phi_mu.

    For vector operators the input is the vector curvelet e_component *
    phi_mu and every output component is analyzed.  ``threshold`` is
    relative to the column norm; entries below it are dropped.
    """
    if threshold <= 0:
        raise ValueError("threshold must be positive")
    table.validate_index(mu)
    atom = frame_atom(table, mu)
    if op.is_vector:
        u = np.zeros((3,) + atom.shape, dtype=np.complex128)
        u[component] = atom
        out = op.apply(u)
        comps = [analyze(table, out[c]) for c in range(3)]
    else:
        if component != 0:
            raise ValueError("scalar operators have a single component 0")
        out = op.apply(atom)
        comps = [analyze(table, out)]

    energy = sum(c.norm2() for c in comps)
    cut = threshold * math.sqrt(energy) if energy > 0 else threshold
    rows, row_nu, vals = [], [], []
    for nu, cs in enumerate(comps):
        keep, kv = _threshold_coeffs(cs, cut)
        rows.append(keep)
        row_nu.append(np.full(len(keep), nu, dtype=np.int64))
        vals.append(kv)
    return MatrixColumn(
        col_index=mu,
        col_component=component,
        rows_flat=np.concatenate(rows),
        row_component=np.concatenate(row_nu),
        values=np.concatenate(vals),
        energy=float(energy),
        threshold=float(cut),
    )


@dataclass
class SparseOperatorMatrix:
    """Sampled thresholded curvelet matrix of one operator at one time."""

    table: FrameTable
    op: OperatorSpec
    columns: list[MatrixColumn] = field(default_factory=list)

    @property
    def t(self) -> float:
        return self.op.t

    def total_entries(self) -> int:
        return sum(c.nnz for c in self.columns)

    def write_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            wr = csv.writer(fh)
            wr.writerow(
                ["row_j", "row_l", "row_k1", "row_k2", "row_nu",
                 "col_j", "col_l", "col_k1", "col_k2", "col_nu", "re", "im"]
            )
            for col in self.columns:
                j, ell, k1, k2 = self.table.index_of_flat(col.rows_flat)
                mu = col.col_index
                for i in range(col.nnz):
                    wr.writerow(
                        [j[i], ell[i], k1[i], k2[i], col.row_component[i],
                         mu.j, mu.ell, mu.k1, mu.k2, col.col_component,
                         f"{col.values[i].real:.17g}", f"{col.values[i].imag:.17g}"]
                    )

    @classmethod
    def read_csv(cls, table: FrameTable, op: OperatorSpec, path) -> SparseOperatorMatrix:
        by_col: dict[tuple, list] = {}
        with open(path, newline="") as fh:
            rd = csv.DictReader(fh)
            for row in rd:
                key = (int(row["col_j"]), int(row["col_l"]), int(row["col_k1"]), int(row["col_k2"]), int(row["col_nu"]))
                mu_row = CurveletIndex(int(row["row_j"]), int(row["row_l"]), int(row["row_k1"]), int(row["row_k2"]))
                val = complex(float(row["re"]), float(row["im"]))
                by_col.setdefault(key, []).append((table.flat_of_index(mu_row), int(row["row_nu"]), val))
        mat = cls(table=table, op=op)
        for key, entries in sorted(by_col.items()):
            rows = np.array([e[0] for e in entries], dtype=np.int64)
            nus = np.array([e[1] for e in entries], dtype=np.int64)
            vals = np.array([e[2] for e in entries], dtype=np.complex128)
            energy = float(np.sum(np.abs(vals) ** 2))
            mat.columns.append(
                MatrixColumn(CurveletIndex(*key[:4]), key[4], rows, nus, vals, energy, 0.0)
            )
        return mat


def _fit_sorted_decay(mags: np.ndarray, n_lo: int = 10, n_hi: int = 500) -> float:
    """Log-log slope of the sorted magnitudes |a|_(n) vs n (Theil-Sen)."""
    mags = np.sort(mags)[::-1]
    hi = min(n_hi, len(mags))
    if hi <= n_lo + 3:
        return -math.inf
    ranks = np.arange(n_lo, hi) + 1.0
    vals = mags[n_lo:hi]
    pos = vals > 0
    if pos.sum() < 4:
        return -math.inf
    slope, *_ = theilslopes(np.log(vals[pos]), np.log(ranks[pos]))
    return float(slope)


def _flowed_points(table: FrameTable, mu: CurveletIndex, model: VelocityModel, t: float, branches=BRANCHES):
    """Unsnapped flow images of the index center, one per branch."""
    out = {}
    for b in branches:
        s = normalize_branch(b)
        if s == 0 or t == 0:
            out[s] = table.phase_point(mu)
            continue
        st = flow(FlowState.initial(table.center(mu), table.xi_center(mu)), model, s, t)
        out[s] = PhasePoint(x=st.x, xi=st.xi, directional=True)
    return out


def _row_points(table: FrameTable, flat: np.ndarray) -> PhasePoint:
    j, ell, k1, k2 = table.index_of_flat(flat)
    x = np.empty((len(flat), 2))
    xi = np.empty((len(flat), 2))
    directional = np.empty(len(flat), dtype=bool)
    for key in {(int(a), int(b)) for a, b in zip(j, ell)}:
        w = table.wedge(*key)
        m = (j == key[0]) & (ell == key[1])
        x[m, 0] = k1[m] / w.rect[0]
        x[m, 1] = k2[m] / w.rect[1]
        if w.kind == "directional":
            xi[m] = w.rho * np.array([math.cos(w.theta), math.sin(w.theta)])
            directional[m] = True
        else:
            xi[m] = np.array([max(w.rho, 1.0), 0.0])
            directional[m] = False
    return PhasePoint(x=x, xi=xi, directional=directional)


def column_omegas(table: FrameTable, col: MatrixColumn, model: VelocityModel, t: float) -> np.ndarray:
    """omega between each row index and the flowed column index, min over branches."""
    points = _row_points(table, col.rows_flat)
    flowed = _flowed_points(table, col.col_index, model, t)
    dists = [omega(points, target) for target in flowed.values()]
    return np.min(np.stack(dists), axis=0)


@dataclass
class ColumnReport:
    col: list
    nnz: int
    energy: float
    kept_energy: float
    decay_slope: float
    lp_half: float
    lp_one: float
    largest_omega: float
    radius_95: float

    def to_json(self) -> dict:
        return dict(self.__dict__)


@dataclass
class DecayReport:
    """Aggregated sparsity/organization diagnostics of a sampled matrix."""

    columns: list[ColumnReport]
    ball_radii: list[float]
    concentration: list[float]  # mean energy fraction within each radius

    @property
    def median_slope(self) -> float:
        return float(np.median([c.decay_slope for c in self.columns]))

    def slope_quantile(self, q: float) -> float:
        return float(np.quantile([c.decay_slope for c in self.columns], q))

    def radius_for_fraction(self, frac: float) -> float:
        conc = np.asarray(self.concentration)
        idx = np.searchsorted(conc, frac)
        if idx >= len(self.ball_radii):
            return math.inf
        return self.ball_radii[idx]

    def to_json(self) -> dict:
        return {
            "median_slope": self.median_slope,
            "ball_radii": list(self.ball_radii),
            "concentration": list(self.concentration),
            "columns": [c.to_json() for c in self.columns],
        }


def decay_report(
    matrix: SparseOperatorMatrix,
    model: VelocityModel | None = None,
    ball_radii=None,
) -> DecayReport:
    """Sorted-entry decay fits and omega-ball concentration for each column.

    Raises:
        ValueError: on an empty matrix.
    """
    if not matrix.columns:
        raise ValueError("decay report of an empty matrix")
    model = model or matrix.op.model or VelocityModel.constant(matrix.op.c0)
    radii = np.asarray(ball_radii if ball_radii is not None else np.geomspace(1.0, 64.0, 25))
    t = matrix.t
    table = matrix.table
    reports = []
    curves = []
    for col in matrix.columns:
        mags = np.abs(col.values)
        omegas = column_omegas(table, col, model, t)
        kept = col.kept_energy()
        e2 = mags**2
        inside = np.array([float(e2[omegas <= r].sum()) for r in radii])
        frac = inside / col.energy if col.energy > 0 else inside
        curves.append(frac)
        idx95 = int(np.searchsorted(frac, 0.95))
        largest = float(omegas[np.argmax(mags)]) if col.nnz else math.inf
        reports.append(
            ColumnReport(
                col=[col.col_index.j, col.col_index.ell, col.col_index.k1, col.col_index.k2, col.col_component],
                nnz=col.nnz,
                energy=col.energy,
                kept_energy=kept,
                decay_slope=_fit_sorted_decay(mags),
                lp_half=float(np.sum(np.sqrt(mags))),
                lp_one=float(np.sum(mags)),
                largest_omega=largest,
                radius_95=float(radii[idx95]) if idx95 < len(radii) else math.inf,
            )
        )
    return DecayReport(
        columns=reports,
        ball_radii=[float(r) for r in radii],
        concentration=[float(v) for v in np.mean(np.stack(curves), axis=0)],
    )


def build_matrix(
    table: FrameTable,
    op: OperatorSpec,
    columns: list[CurveletIndex],
    components=None,
    threshold: float = DEFAULT_THRESHOLD,
) -> SparseOperatorMatrix:
    """Compute the sampled columns of the operator's curvelet matrix.

    Columns are independent; with CURVEWAVE_THREADS > 1 they are computed
    on a thread pool and merged in request order.
    """
    from concurrent.futures import ThreadPoolExecutor

    from ._core import thread_count

    comps = list(components) if components is not None else ([0, 1, 2] if op.is_vector else [0])
    jobs = [(mu, nu) for mu in columns for nu in comps]
    mat = SparseOperatorMatrix(table=table, op=op)
    workers = min(thread_count(), len(jobs)) or 1
    if workers > 1 and op.kind != "variable-wave":  # the stepped solver batches poorly
        with ThreadPoolExecutor(max_workers=workers) as pool:
            mat.columns = list(pool.map(lambda job: curvelet_column(table, op, *job, threshold), jobs))
    else:
        mat.columns = [curvelet_column(table, op, mu, nu, threshold) for mu, nu in jobs]
    return mat


def _truncate_column(col: MatrixColumn, keep: int, order: np.ndarray):
    """Residual values after keeping the first `keep` entries of `order`."""
    if keep > col.nnz:
        raise ValueError(f"keep={keep} exceeds the column support ({col.nnz} entries)")
    if keep == col.nnz:
        empty = np.zeros(0, dtype=np.int64)
        return np.zeros(0, dtype=np.complex128), empty, empty
    drop = order[keep:]
    return col.values[drop], col.rows_flat[drop], col.row_component[drop]


def truncation_error(
    matrix: SparseOperatorMatrix,
    keep_per_column: int,
    mode: str = "largest",
    model: VelocityModel | None = None,
    iters: int = 30,
    restarts: int = 2,
    seed: int = 0,
) -> float:
    """Spectral-norm estimate of A - A_B on the sampled columns.

    A_B keeps `keep_per_column` entries per column, either the largest in
    magnitude (mode "largest") or the nearest to the flowed column index
    in the pseudo-distance (mode "nearest").  The residual norm is the top
    singular value of the residual column block, estimated by power
    iteration on its Gram matrix with random restarts; it is decreasing
    in keep_per_column by construction.
    """
    if keep_per_column < 1:
        raise ValueError("keep_per_column must be >= 1")
    cols = matrix.columns
    m = len(cols)
    if m == 0:
        raise ValueError("truncation error of an empty matrix")
    if mode == "largest":
        orders = [np.argsort(np.abs(c.values))[::-1] for c in cols]
    elif mode == "nearest":
        model = model or matrix.op.model or VelocityModel.constant(matrix.op.c0)
        orders = [np.argsort(column_omegas(matrix.table, c, model, matrix.t)) for c in cols]
    else:
        raise ValueError(f"unknown truncation mode {mode!r}")
    residuals = [_truncate_column(c, keep_per_column, o) for c, o in zip(cols, orders)]
    # Gram matrix of residual columns in the packed coefficient space.
    gram = np.zeros((m, m), dtype=np.complex128)
    for a in range(m):
        va, ra, na = residuals[a]
        if len(va) == 0:
            continue
        key_a = ra * 4 + na  # component count is <= 3; 4 keeps keys unique
        order_a = np.argsort(key_a)
        key_a, va_s = key_a[order_a], va[order_a]
        for b in range(a, m):
            vb, rb, nb = residuals[b]
            if len(vb) == 0:
                continue
            key_b = rb * 4 + nb
            order_b = np.argsort(key_b)
            key_b_s, vb_s = key_b[order_b], vb[order_b]
            ia = np.searchsorted(key_b_s, key_a)
            ia = np.clip(ia, 0, len(key_b_s) - 1)
            match = key_b_s[ia] == key_a
            dot = np.sum(np.conj(va_s[match]) * vb_s[ia[match]])
            gram[a, b] = dot
            gram[b, a] = np.conj(dot)
    rng = np.random.default_rng(seed)
    best = 0.0
    for _ in range(restarts + 1):
        v = rng.standard_normal(m) + 1j * rng.standard_normal(m)
        v /= np.linalg.norm(v)
        lam = 0.0
        for _ in range(iters):
            w = gram @ v
            nw = np.linalg.norm(w)
            if nw == 0:
                break
            lam = nw
            v = w / nw
        best = max(best, lam)
    return math.sqrt(best)


def polarization_split(table: FrameTable, t: float, mu: CurveletIndex, component=None, hyper_mode: str | None = None):
    """Per-branch energy fractions of a propagated vector/hyper curvelet.

    ``component`` selects the canonical vector curvelet e_nu phi_mu;
    ``hyper_mode`` ("pointwise" or "center") selects a hyper curvelet of
    the + branch instead.  Fractions sum to 1.
    """
    if (component is None) == (hyper_mode is None):
        raise ValueError("pass exactly one of component / hyper_mode")
    if hyper_mode is not None:
        u = hyper_curvelet(table, mu, "+", mode=hyper_mode)
    else:
        atom = frame_atom(table, mu)
        u = np.zeros((3,) + atom.shape, dtype=np.complex128)
        u[component] = atom
    return polarization_fractions(apply_acoustic(u, t))
