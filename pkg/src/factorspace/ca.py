"""Correspondence analysis of a contingency table.

The table ``n_ij`` is turned into frequencies ``f_ij = n_ij / N`` with row
masses ``f_i`` and column masses ``f_j``. The standardized residuals

    s_ij = (f_ij - f_i f_j) / sqrt(f_i f_j)

carry all of the inertia, ``sum s_ij**2 = chi2 / N``. Only the cross-product
of ``s`` on the smaller side is diagonalized, so a table of 150,000 records
by 250 terms costs one 250 x 250 symmetric eigenproblem. The cross-product is
formed from the sparse counts without ever densifying ``s``:

    s.T @ s = a.T @ a - sqrt(f_J) sqrt(f_J).T,   a = D_I^-1/2 f_IJ D_J^-1/2

The subtracted rank-one term is the centring; it removes the trivial
eigenvalue 1 of ``a.T @ a`` in exact arithmetic.

Coordinates of the other side come from the transition formula: a row's
principal coordinate on factor ``k`` is the profile-weighted mean of the
column standard coordinates, ``sum_j (f_ij / f_i) * g_jk / sqrt(lambda_k)``.
Supplementary rows and columns go through exactly the same formula.
"""

from __future__ import annotations

import io
import zipfile
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy import linalg, sparse

from .matrix import ContingencyTable

RELATIVE_CUTOFF = 1e-12


class DegenerateTableError(ValueError):
    """Fewer than two non-empty rows or columns."""


class AlignmentError(ValueError):
    pass


@dataclass
class CorrespondenceModel:
    row_labels: list[str]
    col_labels: list[str]
    row_masses: np.ndarray
    col_masses: np.ndarray
    eigenvalues: np.ndarray
    row_coords: np.ndarray
    col_coords: np.ndarray
    total_inertia: float
    row_dist2: np.ndarray
    col_dist2: np.ndarray
    grand_total: float = 0.0
    dropped_rows: list[str] = field(default_factory=list)
    dropped_cols: list[str] = field(default_factory=list)

    @property
    def rank(self) -> int:
        return int(self.eigenvalues.size)

    @property
    def row_standard(self) -> np.ndarray:
        return self.row_coords / np.sqrt(self.eigenvalues)

    @property
    def col_standard(self) -> np.ndarray:
        return self.col_coords / np.sqrt(self.eigenvalues)

    def row_index(self, label: str) -> int:
        try:
            return self.row_labels.index(label)
        except ValueError:
            raise KeyError(f"unknown row label {label!r}") from None

    def col_index(self, label: str) -> int:
        try:
            return self.col_labels.index(label)
        except ValueError:
            raise KeyError(f"unknown column label {label!r}") from None

    def coords(self, side: str = "rows") -> tuple[list[str], np.ndarray]:
        if side == "rows":
            return self.row_labels, self.row_coords
        if side in ("cols", "columns"):
            return self.col_labels, self.col_coords
        raise ValueError(f"side must be 'rows' or 'cols', not {side!r}")

    def plane(self, side: str = "rows", axes: tuple[int, int] = (1, 2)) -> np.ndarray:
        """``n x 2`` coordinates on two factors (1-based); absent factors are 0."""
        _, xy = self.coords(side)
        out = np.zeros((xy.shape[0], 2))
        for c, k in enumerate(axes):
            if 1 <= k <= self.rank:
                out[:, c] = xy[:, k - 1]
        return out


def _null_floor(shape: tuple[int, int]) -> float:
    # eigenvalues of the centred cross-product are exact to about
    # max(n, m) * eps; anything below that is rounding noise
    return 100 * np.finfo(float).eps * max(shape)


def _fix_signs(col_coords: np.ndarray) -> np.ndarray:
    """+1/-1 per factor making the largest-magnitude column coordinate positive."""
    if col_coords.size == 0:
        return np.ones(col_coords.shape[1])
    idx = np.argmax(np.abs(col_coords), axis=0)
    signs = np.sign(col_coords[idx, np.arange(col_coords.shape[1])])
    signs[signs == 0] = 1.0
    return signs


def fit(table: ContingencyTable) -> CorrespondenceModel:
    """Fit a correspondence analysis to ``table``.

    Empty rows and columns carry no mass and are left out; their labels are
    kept in ``dropped_rows`` / ``dropped_cols``. A table with no departure
    from independence gives a model of rank 0.
    """
    counts = table.counts
    if counts.nnz and counts.data.min() < 0:
        raise ValueError("counts must be non-negative")
    rt, ct = table.row_totals, table.col_totals
    rkeep, ckeep = np.flatnonzero(rt > 0), np.flatnonzero(ct > 0)
    if rkeep.size < 2 or ckeep.size < 2:
        raise DegenerateTableError(
            f"need at least 2 non-empty rows and columns, got {rkeep.size} x {ckeep.size}")

    x = counts[rkeep][:, ckeep].astype(np.float64)
    total = float(x.sum())
    f = x / total
    r = np.asarray(f.sum(axis=1)).ravel()
    c = np.asarray(f.sum(axis=0)).ravel()
    n, m = f.shape
    sr, sc = np.sqrt(r), np.sqrt(c)
    a = sparse.diags(1 / sr) @ f @ sparse.diags(1 / sc)

    cols_side = m <= n
    if cols_side:
        gram = (a.T @ a).toarray() - np.outer(sc, sc)
    else:
        gram = (a @ a.T).toarray() - np.outer(sr, sr)
    gram = (gram + gram.T) / 2
    total_inertia = float(np.trace(gram))

    w, vecs = linalg.eigh(gram)
    w, vecs = w[::-1], vecs[:, ::-1]
    floor = _null_floor(f.shape)
    keep = w > max(RELATIVE_CUTOFF * max(w[0], 0.0), floor)
    lam, vecs = w[keep], vecs[:, keep]
    # eigenvectors of tiny factors can lean on the trivial direction sqrt(mass),
    # which the transition formula would turn into a constant offset
    triv = sc if cols_side else sr
    vecs = vecs - np.outer(triv, triv @ vecs)
    vecs /= np.linalg.norm(vecs, axis=0)

    row_prof = sparse.diags(1 / r) @ f
    col_prof = sparse.diags(1 / c) @ f.T.tocsr()
    if cols_side:
        col_std = vecs / sc[:, None]
        signs = _fix_signs(col_std)
        col_std = col_std * signs
        col_coords = col_std * np.sqrt(lam)
        row_coords = np.asarray(row_prof @ col_std)
    else:
        row_std = vecs / sr[:, None]
        col_coords = np.asarray(col_prof @ row_std)
        signs = _fix_signs(col_coords)
        col_coords = col_coords * signs
        row_coords = row_std * signs * np.sqrt(lam)

    row_dist2 = np.asarray(row_prof.multiply(row_prof) @ (1 / c)).ravel() - 1
    col_dist2 = np.asarray(col_prof.multiply(col_prof) @ (1 / r)).ravel() - 1

    if lam.size == 0:
        total_inertia = 0.0

    return CorrespondenceModel(
        row_labels=[table.row_labels[i] for i in rkeep],
        col_labels=[table.col_labels[j] for j in ckeep],
        row_masses=r,
        col_masses=c,
        eigenvalues=lam,
        row_coords=row_coords,
        col_coords=col_coords,
        total_inertia=total_inertia,
        row_dist2=np.maximum(row_dist2, 0.0),
        col_dist2=np.maximum(col_dist2, 0.0),
        grand_total=total,
        dropped_rows=[table.row_labels[i] for i in np.flatnonzero(rt == 0)],
        dropped_cols=[table.col_labels[j] for j in np.flatnonzero(ct == 0)],
    )


@dataclass
class Projection:
    """Supplementary coordinates; rows that could not be projected are NaN."""

    labels: list[str]
    coords: np.ndarray
    errors: dict[str, str] = field(default_factory=dict)

    @property
    def ok(self) -> np.ndarray:
        return ~np.isnan(self.coords).any(axis=1) if self.coords.size else np.ones(len(self.labels), bool)


def _aligned(sup, labels: list[str], dropped: list[str], what: str):
    """Counts of ``sup`` (elements x model-side labels) in model order."""
    if not isinstance(sup, ContingencyTable):
        arr = np.asarray(sup, dtype=float)
        if arr.ndim == 1:
            arr = arr[None, :]
        if arr.shape[1] != len(labels):
            raise AlignmentError(f"expected {len(labels)} {what}, got {arr.shape[1]}")
        return [f"s{i + 1}" for i in range(arr.shape[0])], sparse.csr_matrix(arr)
    have = set(sup.col_labels)
    missing = [c for c in labels if c not in have]
    extra = have - set(labels) - set(dropped)
    if missing or extra:
        raise AlignmentError(
            f"supplementary {what} do not match the fitted ones "
            f"(missing {sorted(missing)[:5]}, unexpected {sorted(extra)[:5]})")
    pos = {c: j for j, c in enumerate(sup.col_labels)}
    return sup.row_labels, sup.counts[:, [pos[c] for c in labels]].astype(float)


def _project(labels, counts, standard: np.ndarray) -> Projection:
    tot = np.asarray(counts.sum(axis=1)).ravel()
    out = np.full((counts.shape[0], standard.shape[1]), np.nan)
    errors = {}
    good = tot > 0
    for i in np.flatnonzero(~good):
        errors[labels[i]] = "zero total over the fitted labels"
    if good.any():
        idx = np.flatnonzero(good)
        prof = sparse.diags(1 / tot[idx]) @ counts[idx]
        out[idx] = np.asarray(prof @ standard)
    return Projection(list(labels), out, errors)


def project_supplementary_rows(model: CorrespondenceModel, sup) -> Projection:
    """Project rows not used in the fit.

    ``sup`` is a table over the fitted column labels (any order), or an
    array whose columns follow ``model.col_labels``.
    """
    labels, counts = _aligned(sup, model.col_labels, model.dropped_cols, "columns")
    return _project(labels, counts, model.col_standard)


def project_supplementary_cols(model: CorrespondenceModel, sup) -> Projection:
    """Project columns not used in the fit.

    ``sup`` is a table whose *rows* are the fitted row labels and whose
    columns are the new elements, or an array shaped ``(n_rows, s)``.
    """
    if isinstance(sup, ContingencyTable):
        t = ContingencyTable(sup.counts.T.tocsr(), sup.col_labels, sup.row_labels)
    else:
        arr = np.asarray(sup, dtype=float)
        t = arr.T if arr.ndim == 2 else arr
    try:
        labels, counts = _aligned(t, model.row_labels, model.dropped_rows, "rows")
    except AlignmentError as exc:
        raise AlignmentError(str(exc)) from None
    return _project(labels, counts, model.row_standard)


@dataclass(frozen=True)
class EigenRow:
    k: int
    eigenvalue: float
    percent: float
    cumulative: float


def eigen_report(model: CorrespondenceModel | Sequence[float]) -> list[EigenRow]:
    lam = np.asarray(model.eigenvalues if isinstance(model, CorrespondenceModel) else model,
                     dtype=float)
    if lam.size == 0:
        return []
    pct = 100 * lam / lam.sum()
    cum = np.cumsum(pct)
    cum[-1] = 100.0
    return [EigenRow(k + 1, float(lam[k]), float(pct[k]), float(cum[k]))
            for k in range(lam.size)]


@dataclass
class Contributions:
    """Absolute contributions (CTR) and squared cosines per element and factor."""

    row_labels: list[str]
    col_labels: list[str]
    row_ctr: np.ndarray
    col_ctr: np.ndarray
    row_cos2: np.ndarray
    col_cos2: np.ndarray

    @property
    def row_argmax(self) -> list[str]:
        return [self.row_labels[i] for i in np.argmax(self.row_ctr, axis=0)]

    @property
    def col_argmax(self) -> list[str]:
        return [self.col_labels[j] for j in np.argmax(self.col_ctr, axis=0)]

    def strongest(self, k: int, side: str = "cols", top: int = 1) -> list[tuple[str, float]]:
        """Labels with the largest contributions to factor ``k`` (1-based)."""
        labels, ctr = ((self.row_labels, self.row_ctr) if side == "rows"
                       else (self.col_labels, self.col_ctr))
        col = ctr[:, k - 1]
        order = sorted(range(len(labels)), key=lambda i: (-col[i], labels[i]))
        return [(labels[i], float(col[i])) for i in order[:top]]


def contributions(model: CorrespondenceModel) -> Contributions:
    if model.rank < 1:
        raise DegenerateTableError("model has no factors")
    lam = model.eigenvalues

    def ctr_cos(mass, coords, dist2):
        sq = coords ** 2
        ctr = mass[:, None] * sq / lam
        with np.errstate(divide="ignore", invalid="ignore"):
            cos2 = np.where(dist2[:, None] > 0, sq / dist2[:, None], 0.0)
        return ctr, cos2

    rc, rq = ctr_cos(model.row_masses, model.row_coords, model.row_dist2)
    cc, cq = ctr_cos(model.col_masses, model.col_coords, model.col_dist2)
    return Contributions(model.row_labels, model.col_labels, rc, cc, rq, cq)


def plane_table(model: CorrespondenceModel, side: str = "cols",
                axes: tuple[int, int] = (1, 2)) -> list[tuple[str, float, float, float, float, float]]:
    """``(label, x, y, mass, ctr_x, ctr_y)`` for plotting a factor plane."""
    labels, _ = model.coords(side)
    xy = model.plane(side, axes)
    mass = model.row_masses if side == "rows" else model.col_masses
    ctr = np.zeros((len(labels), 2))
    if model.rank:
        con = contributions(model)
        full = con.row_ctr if side == "rows" else con.col_ctr
        for c, k in enumerate(axes):
            if 1 <= k <= model.rank:
                ctr[:, c] = full[:, k - 1]
    return [(labels[i], float(xy[i, 0]), float(xy[i, 1]), float(mass[i]),
             float(ctr[i, 0]), float(ctr[i, 1])) for i in range(len(labels))]


# -- persistence -------------------------------------------------------------

_ARRAYS = ("row_masses", "col_masses", "eigenvalues", "row_coords", "col_coords",
           "row_dist2", "col_dist2")
_LABELS = ("row_labels", "col_labels", "dropped_rows", "dropped_cols")


def save_model(model: CorrespondenceModel, path) -> None:
    """Write an ``.npz``-compatible archive with fixed timestamps (byte-stable)."""
    entries = {name: np.ascontiguousarray(getattr(model, name)) for name in _ARRAYS}
    for name in _LABELS:
        entries[name] = np.array(getattr(model, name), dtype=str)
    entries["scalars"] = np.array([model.total_inertia, model.grand_total])
    with zipfile.ZipFile(path, "w", compression=zipfile.ZIP_STORED) as zf:
        for name, arr in entries.items():
            buf = io.BytesIO()
            np.lib.format.write_array(buf, arr, allow_pickle=False)
            info = zipfile.ZipInfo(name + ".npy", date_time=(1980, 1, 1, 0, 0, 0))
            zf.writestr(info, buf.getvalue())


def load_model(path) -> CorrespondenceModel:
    with np.load(path, allow_pickle=False) as z:
        kw = {name: z[name] for name in _ARRAYS}
        for name in _LABELS:
            kw[name] = [str(s) for s in z[name]]
        total_inertia, grand_total = z["scalars"]
    r = kw["eigenvalues"].size
    for name in ("row_coords", "col_coords"):
        kw[name] = kw[name].reshape(-1, r)
    return CorrespondenceModel(total_inertia=float(total_inertia),
                               grand_total=float(grand_total), **kw)
