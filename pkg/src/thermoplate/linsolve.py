"""Sparse direct (and optional iterative) solvers with residual checking.

The time-step matrices are constant in time, so one factorization is
reused for all right-hand sides of a run.  Every solve is verified
against a relative-residual bound; a failure aborts the run rather than
silently corrupting a convergence study.
"""

from __future__ import annotations

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

__all__ = ["FactorizationError", "SolveError", "factor", "Factorization"]


class FactorizationError(RuntimeError):
    """Raised when the matrix cannot be factored (singular pivot)."""


class SolveError(RuntimeError):
    """Raised when a solve fails its residual check."""


class Factorization:
    """Reusable solver handle wrapping a sparse LU (or an iterative fallback)."""

    def __init__(self, matrix: sp.spmatrix, method: str = "direct", residual_tol: float = 1e-10):
        if matrix.shape[0] != matrix.shape[1]:
            raise ValueError("matrix must be square")
        self.matrix = matrix.tocsr()
        self.n = matrix.shape[0]
        self.method = method
        self.residual_tol = residual_tol
        if method == "direct":
            try:
                self._lu = spla.splu(self.matrix.tocsc())
            except RuntimeError as exc:  # SuperLU signals singularity this way
                raise FactorizationError(str(exc)) from exc
        elif method == "iterative":
            try:
                ilu = spla.spilu(self.matrix.tocsc(), drop_tol=1e-8, fill_factor=20)
            except RuntimeError as exc:
                raise FactorizationError(str(exc)) from exc
            self._precond = spla.LinearOperator(matrix.shape, ilu.solve)
        else:
            raise ValueError(f"unknown solver method {method!r}")

    def solve(self, rhs: np.ndarray) -> np.ndarray:
        rhs = np.asarray(rhs, dtype=float)
        if rhs.shape != (self.n,):
            raise ValueError(f"rhs has shape {rhs.shape}, expected ({self.n},)")
        if self.method == "direct":
            x = self._lu.solve(rhs)
            # one or two rounds of iterative refinement keep ill-conditioned
            # penalty-dominated systems inside the residual contract
            for _ in range(2):
                r = rhs - self.matrix @ x
                if float(np.linalg.norm(r)) <= 0.05 * self.residual_tol * max(float(np.linalg.norm(rhs)), 1e-300):
                    break
                x = x + self._lu.solve(r)
        else:
            x, info = spla.gmres(self.matrix, rhs, M=self._precond, rtol=1e-12, atol=0.0, restart=200)
            if info != 0:
                raise SolveError(f"GMRES did not converge (info={info})")
        nb = float(np.linalg.norm(rhs))
        res = float(np.linalg.norm(self.matrix @ x - rhs))
        if nb > 0.0:
            if res / nb >= self.residual_tol:
                raise SolveError(f"relative residual {res / nb:.3e} exceeds {self.residual_tol:.1e}")
        elif res >= self.residual_tol:
            raise SolveError(f"residual {res:.3e} on zero rhs exceeds {self.residual_tol:.1e}")
        return x


def factor(matrix: sp.spmatrix, method: str = "direct", residual_tol: float = 1e-10) -> Factorization:
    """Factor a sparse square matrix once for repeated solves."""
    return Factorization(matrix, method=method, residual_tol=residual_tol)
