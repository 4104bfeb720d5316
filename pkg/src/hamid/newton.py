"""Newton solve for (H0, H1) from initial and target propagators.

One iteration: propagate the current pair, Hermitize the mismatch

    S = i (U_N^dag U_tar - U_tar^dag U_N) / 2,

assemble the vectorized linear map

    dt sum_n (Ubar_n^T kron Ubar_n^dag) vec(dH0)
        + dt sum_n E_n (Ubar_n^T kron Ubar_n^dag) vec(dH1) = vec(S),

reduce it to a square real system over the independent entries of the
symmetric updates, and solve by dense LU.

Vectorization is column major: vec(M)[c*d + r] = M[r, c], under which
vec(A X B) = (B^T kron A) vec(X).  The reduction keeps, for every entry
(i, j) with i <= j in row-major order, the real part of scalar equation
(i, j) followed (for i < j) by its imaginary part; unknowns are the upper
triangle of dH0 (diagonal included) followed by the strict upper triangle
of dH1.  Both counts equal d^2, so the reduced system is square.
"""
from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
import scipy.linalg

from .fields import TimeGrid
from .linalg import require_square, require_unitary, spec_norm
from .propagation import HamiltonianPair, Trajectory, propagate_final, propagate_with_gram

FLAG_CONVERGED = "converged"
FLAG_MAX_ITERS = "max_iters"
FLAG_SINGULAR = "singular_jacobian"


class SingularJacobianError(np.linalg.LinAlgError):
    """Reduced Newton system judged numerically singular."""

    def __init__(self, condition: float, iteration: Optional[int] = None):
        self.condition = condition
        self.iteration = iteration
        where = f" at iteration {iteration}" if iteration is not None else ""
        super().__init__(
            f"reduced Newton system is numerically singular{where} "
            f"(condition estimate {condition:.3e})"
        )


@dataclass(frozen=True)
class NewtonConfig:
    tol: float = 1e-12
    max_iters: int = 50
    singular_cond_threshold: float = 1e12

    def __post_init__(self):
        if not (self.tol > 0 and self.max_iters > 0 and self.singular_cond_threshold > 0):
            raise ValueError("NewtonConfig fields must be positive")


@dataclass(frozen=True)
class NewtonUpdate:
    dh0: np.ndarray
    dh1: np.ndarray


@dataclass(frozen=True)
class ReducedSystem:
    """Square real system over the independent symmetric entries.

    ``unknown_index_map`` lists, in column order, tuples ("h0"|"h1", i, j)
    with i <= j naming the matrix entry each unknown corresponds to.
    """

    matrix: np.ndarray
    rhs: np.ndarray
    unknown_index_map: tuple

    @property
    def size(self) -> int:
        return self.matrix.shape[0]


@dataclass
class NewtonIteration:
    k: int
    e_k: float
    dev_h0: Optional[float]
    dev_h1: Optional[float]
    dev_u: Optional[float]
    jacobian_condition: float
    residual_skew: float


@dataclass
class NewtonReport:
    """Per-iteration convergence records plus the stopping flag."""

    iterations: list = field(default_factory=list)
    flag: str = FLAG_MAX_ITERS
    failure_condition: Optional[float] = None
    failed_iteration: Optional[int] = None

    @property
    def n_iterations(self) -> int:
        return len(self.iterations)

    def final(self) -> Optional[NewtonIteration]:
        return self.iterations[-1] if self.iterations else None

    def to_json_dict(self) -> dict:
        return {
            "flag": self.flag,
            "failure_condition": self.failure_condition,
            "failed_iteration": self.failed_iteration,
            "iterations": [
                {
                    "k": it.k,
                    "e_k": it.e_k,
                    "dev_h0": it.dev_h0,
                    "dev_h1": it.dev_h1,
                    "dev_u": it.dev_u,
                    "jacobian_condition": it.jacobian_condition,
                    "residual_skew": it.residual_skew,
                }
                for it in self.iterations
            ],
        }

    def write_csv(self, path) -> None:
        from .reporting import format_float

        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["k", "e_k", "dev_H0", "dev_H1", "dev_U", "cond"])
            for it in self.iterations:
                writer.writerow(
                    [
                        it.k,
                        format_float(it.e_k),
                        format_float(it.dev_h0),
                        format_float(it.dev_h1),
                        format_float(it.dev_u),
                        format_float(it.jacobian_condition),
                    ]
                )

    def write_json(self, path) -> None:
        with open(path, "w") as fh:
            json.dump(self.to_json_dict(), fh, indent=2)
            fh.write("\n")


def hermitian_residual(u_n: np.ndarray, u_tar: np.ndarray) -> np.ndarray:
    """S = i (U_N^dag U_tar - U_tar^dag U_N) / 2, Hermitian by construction."""
    u_n = require_square(np.asarray(u_n, dtype=complex), "U_N")
    u_tar = np.asarray(u_tar, dtype=complex)
    if u_tar.shape != u_n.shape:
        raise ValueError("U_N and U_tar dimensions differ")
    m = u_n.conj().T @ u_tar
    return 0.5j * (m - m.conj().T)


def residual_skew_norm(u_n: np.ndarray, u_tar: np.ndarray) -> float:
    """Norm of the part of i(U_N^dag U_tar - I) the Hermitization discards."""
    r = 1j * (np.asarray(u_n).conj().T @ np.asarray(u_tar) - np.eye(u_n.shape[0]))
    return spec_norm(0.5 * (r - r.conj().T))


def grams_to_jacobians(g0: np.ndarray, g1: np.ndarray, dt: float):
    """Reindex streaming Gram sums into the Kronecker Jacobian blocks.

    With G[a, b] = sum_n flat(Ubar)[a] conj(flat(Ubar))[b] over row-major
    flattening, the column-major Kronecker block is

        J[(c*d+r), (c'*d+r')] = dt * G[(c', c), (r', r)],

    i.e. a (1, 3, 0, 2) axis permutation of G viewed as a d^4 tensor.
    """
    d2 = g0.shape[0]
    d = int(round(d2**0.5))
    j0 = dt * g0.reshape(d, d, d, d).transpose(1, 3, 0, 2).reshape(d2, d2)
    j1 = dt * g1.reshape(d, d, d, d).transpose(1, 3, 0, 2).reshape(d2, d2)
    return j0, j1


def assemble_jacobian(traj: Trajectory, samples: np.ndarray):
    """J0 = dt sum_n (Ubar^T kron Ubar^dag), J1 the field-weighted sum."""
    samples = np.asarray(samples, dtype=float)
    n = traj.states.shape[0] - 1
    if samples.shape != (n,):
        raise ValueError("field length does not match the trajectory")
    ubar = traj.midpoint_products()
    p = ubar.reshape(n, -1)
    pc = p.conj()
    g0 = p.T @ pc
    g1 = (p.T * samples) @ pc
    return grams_to_jacobians(g0, g1, traj.grid.dt)


def unknown_index_map(d: int) -> tuple:
    entries = [("h0", i, j) for i in range(d) for j in range(i, d)]
    entries += [("h1", i, j) for i in range(d) for j in range(i + 1, d)]
    return tuple(entries)


def _merged_columns(j: np.ndarray, d: int, include_diagonal: bool) -> list:
    """Columns of a Kronecker block merged over symmetric unknown entries.

    Entry (p, q) of a symmetric update appears at vec indices q*d+p and
    p*d+q; its merged column is the sum of both (one column on the diagonal).
    """
    cols = []
    for p in range(d):
        for q in range(p if include_diagonal else p + 1, d):
            col = j[:, q * d + p].copy()
            if p != q:
                col += j[:, p * d + q]
            cols.append(col)
    return cols


def reduce_system(j0: np.ndarray, j1: np.ndarray, s_k: np.ndarray) -> ReducedSystem:
    """Collapse the redundant complex system to a square real one."""
    d2 = j0.shape[0]
    d = int(round(d2**0.5))
    if j0.shape != (d2, d2) or j1.shape != (d2, d2):
        raise ValueError("Jacobian blocks must be square and equally sized")
    if s_k.shape != (d, d):
        raise ValueError("residual dimension does not match the Jacobian")
    cols = _merged_columns(j0, d, include_diagonal=True)
    cols += _merged_columns(j1, d, include_diagonal=False)
    full = np.column_stack(cols)  # complex, d^2 x d^2
    rows = []
    rhs = []
    for i in range(d):
        for j in range(i, d):
            a = j * d + i  # vec index of matrix entry (i, j)
            rows.append(full[a].real)
            rhs.append(s_k[i, j].real)
            if i < j:
                rows.append(full[a].imag)
                rhs.append(s_k[i, j].imag)
    return ReducedSystem(
        matrix=np.array(rows),
        rhs=np.array(rhs),
        unknown_index_map=unknown_index_map(d),
    )


def reduced_condition(system: ReducedSystem) -> float:
    """2-norm condition estimate of the reduced matrix (inf when singular)."""
    sv = np.linalg.svd(system.matrix, compute_uv=False)
    if sv[-1] == 0.0:
        return float("inf")
    return float(sv[0] / sv[-1])


def expand_update(x: np.ndarray, index_map: tuple, d: int) -> NewtonUpdate:
    dh0 = np.zeros((d, d))
    dh1 = np.zeros((d, d))
    for value, (which, i, j) in zip(x, index_map):
        target = dh0 if which == "h0" else dh1
        target[i, j] = value
        target[j, i] = value
    return NewtonUpdate(dh0=dh0, dh1=dh1)


def solve_update(
    system: ReducedSystem,
    cfg: NewtonConfig,
    condition: Optional[float] = None,
) -> NewtonUpdate:
    """LU solve of the reduced system, refusing numerically singular maps."""
    cond = reduced_condition(system) if condition is None else condition
    if not np.isfinite(cond) or cond > cfg.singular_cond_threshold:
        raise SingularJacobianError(cond)
    x = scipy.linalg.solve(system.matrix, system.rhs)
    d = int(round(system.size**0.5))
    return expand_update(x, system.unknown_index_map, d)


def newton_identify(
    u_0: np.ndarray,
    u_tar: np.ndarray,
    guess: HamiltonianPair,
    samples: np.ndarray,
    grid: TimeGrid,
    cfg: NewtonConfig = NewtonConfig(),
    truth: Optional[HamiltonianPair] = None,
):
    """Full Newton iteration; returns (final pair, report).

    Row k of the report describes iterate k (after k updates): e_k is the
    spectral-norm size of update k, dev_* the deviations of iterate k from
    the supplied truth and target, and the condition number that of the
    system solved to produce iterate k.  dev_U of a row is filled by the
    next propagation (one extra propagation finishes the last row).
    """
    u_0 = require_unitary(u_0, "initial operator")
    u_tar = require_unitary(u_tar, "target operator")
    samples = np.asarray(samples, dtype=float)
    pair = guess
    dt = grid.dt
    report = NewtonReport(iterations=[], flag=FLAG_MAX_ITERS)
    pending: Optional[NewtonIteration] = None
    for k in range(1, cfg.max_iters + 1):
        u_n, g0, g1 = propagate_with_gram(u_0, pair, samples, grid)
        if pending is not None:
            pending.dev_u = spec_norm(u_tar - u_n)
            report.iterations.append(pending)
            pending = None
        s_k = hermitian_residual(u_n, u_tar)
        j0, j1 = grams_to_jacobians(g0, g1, dt)
        system = reduce_system(j0, j1, s_k)
        cond = reduced_condition(system)
        try:
            update = solve_update(system, cfg, condition=cond)
        except SingularJacobianError as err:
            report.flag = FLAG_SINGULAR
            report.failure_condition = err.condition
            report.failed_iteration = k
            return pair, report
        pair = pair.shifted(update.dh0, update.dh1)
        e_k = spec_norm(update.dh0) + spec_norm(update.dh1)
        pending = NewtonIteration(
            k=k,
            e_k=e_k,
            dev_h0=spec_norm(truth.h0 - pair.h0) if truth is not None else None,
            dev_h1=spec_norm(truth.h1 - pair.h1) if truth is not None else None,
            dev_u=None,
            jacobian_condition=cond,
            residual_skew=residual_skew_norm(u_n, u_tar),
        )
        if e_k <= cfg.tol:
            report.flag = FLAG_CONVERGED
            break
    if pending is not None:
        u_n = propagate_final(u_0, pair, samples, grid)
        pending.dev_u = spec_norm(u_tar - u_n)
        report.iterations.append(pending)
    return pair, report
