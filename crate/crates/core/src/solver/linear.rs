//! Linear solves for the flow and transport saddle-point systems.

use faer::dyn_stack::{MemBuffer, MemStack};
use faer::linalg::lu::partial_pivoting::factor::PartialPivLuParams;
use faer::sparse::linalg::lu::{factorize_symbolic_lu, NumericLu, SymbolicLu};
use faer::sparse::linalg::LuError;
use faer::sparse::{SparseColMatRef, SymbolicSparseColMatRef};
use faer::{Conj, MatMut, Par, Spec};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::forms::sparse::{inf_norm, CsrMatrix, TripletBuilder};

/// Which algorithm solves each linear system.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum LinearSolverKind {
    /// Sparse LU with partial pivoting.
    #[default]
    Direct,
    /// Restarted GMRES right-preconditioned with ILU(0).
    Gmres {
        #[serde(default = "default_gmres_tol")]
        tol: f64,
        #[serde(default = "default_gmres_max_iter")]
        max_iter: usize,
        #[serde(default = "default_gmres_restart")]
        restart: usize,
    },
}

fn default_gmres_tol() -> f64 {
    1e-12
}

fn default_gmres_max_iter() -> usize {
    5000
}

fn default_gmres_restart() -> usize {
    100
}

/// Relative residual required from the direct solver.
pub const DIRECT_RESIDUAL_TOL: f64 = 1e-10;

/// A reusable solver; keeps the symbolic factorization while the sparsity
/// pattern does not change.
pub struct LinearSolver {
    kind: LinearSolverKind,
    context: &'static str,
    symbolic: Option<(Vec<usize>, Vec<usize>, SymbolicLu<usize>)>,
    numeric: NumericLu<usize, f64>,
    pub last_relative_residual: f64,
}

impl std::fmt::Debug for LinearSolver {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("LinearSolver")
            .field("kind", &self.kind)
            .field("context", &self.context)
            .field("last_relative_residual", &self.last_relative_residual)
            .finish_non_exhaustive()
    }
}

impl LinearSolver {
    pub fn new(kind: LinearSolverKind, context: &'static str) -> Self {
        LinearSolver {
            kind,
            context,
            symbolic: None,
            numeric: NumericLu::new(),
            last_relative_residual: 0.0,
        }
    }

    pub fn kind(&self) -> LinearSolverKind {
        self.kind
    }

    pub fn solve(&mut self, a: &CsrMatrix, b: &[f64]) -> Result<Vec<f64>> {
        if a.nrows() != a.ncols() || a.nrows() != b.len() {
            return Err(self.fail(format!(
                "dimension mismatch: {}x{} matrix, rhs of length {}",
                a.nrows(),
                a.ncols(),
                b.len()
            )));
        }
        if !a.is_finite() || b.iter().any(|v| !v.is_finite()) {
            return Err(self.fail("non-finite entries in the assembled system".into()));
        }
        if b.iter().all(|&v| v == 0.0) {
            self.last_relative_residual = 0.0;
            return Ok(vec![0.0; b.len()]);
        }
        let x = match self.kind {
            LinearSolverKind::Direct => self.solve_direct(a, b)?,
            LinearSolverKind::Gmres { tol, max_iter, restart } => {
                let x = gmres_ilu0(a, b, tol, max_iter, restart).map_err(|m| self.fail(m))?;
                self.last_relative_residual = relative_residual(a, &x, b);
                x
            }
        };
        Ok(x)
    }

    fn solve_direct(&mut self, a: &CsrMatrix, b: &[f64]) -> Result<Vec<f64>> {
        let n = a.nrows();
        let (col_ptr, row_idx, vals) = to_csc(a);
        let reuse = matches!(&self.symbolic, Some((cp, ri, _)) if *cp == col_ptr && *ri == row_idx);
        if !reuse {
            let sym = SymbolicSparseColMatRef::new_checked(n, n, &col_ptr, None, &row_idx);
            let lu = factorize_symbolic_lu(sym, Default::default())
                .map_err(|e| self.fail(format!("symbolic factorization failed: {e:?}")))?;
            self.symbolic = Some((col_ptr, row_idx, lu));
        }
        let (col_ptr, row_idx, symbolic) = self.symbolic.as_ref().unwrap();
        let sym = SymbolicSparseColMatRef::new_checked(n, n, col_ptr, None, row_idx);
        let mat = SparseColMatRef::new(sym, &vals);
        let params: Spec<PartialPivLuParams, f64> = Default::default();
        let mut fbuf = MemBuffer::new(symbolic.factorize_numeric_lu_scratch::<f64>(Par::Seq, params));
        let lu = symbolic
            .factorize_numeric_lu(&mut self.numeric, mat, Par::Seq, MemStack::new(&mut fbuf), params)
            .map_err(|e| match e {
                LuError::SymbolicSingular { index } => Error::Solver {
                    context: self.context,
                    message: format!("structurally singular system (column {index} of {n})"),
                },
                LuError::Generic(g) => Error::Solver {
                    context: self.context,
                    message: format!("numeric factorization failed: {g:?}"),
                },
            })?;
        let mut sbuf = MemBuffer::new(symbolic.solve_in_place_scratch::<f64>(1, Par::Seq));
        let mut solve = |rhs: &mut [f64]| {
            let m = MatMut::from_column_major_slice_mut(rhs, n, 1);
            lu.solve_in_place_with_conj(Conj::No, m, Par::Seq, MemStack::new(&mut sbuf));
        };
        let mut x = b.to_vec();
        solve(&mut x);
        let bnorm = inf_norm(b);
        let mut rel = relative_residual(a, &x, b);
        // a couple of refinement sweeps recover digits lost to pivoting
        for _ in 0..3 {
            if rel <= 1e-13 || !rel.is_finite() {
                break;
            }
            let ax = a.matvec(&x);
            let mut r: Vec<f64> = b.iter().zip(&ax).map(|(bi, ai)| bi - ai).collect();
            solve(&mut r);
            let cand: Vec<f64> = x.iter().zip(&r).map(|(xi, di)| xi + di).collect();
            let cand_rel = relative_residual(a, &cand, b);
            if cand_rel < rel {
                x = cand;
                rel = cand_rel;
            } else {
                break;
            }
        }
        self.last_relative_residual = rel;
        if !(rel <= DIRECT_RESIDUAL_TOL) {
            return Err(self.fail(format!(
                "relative residual {rel:e} exceeds {DIRECT_RESIDUAL_TOL:e} (|b| = {bnorm:e}); the system is singular or badly conditioned"
            )));
        }
        Ok(x)
    }

    fn fail(&self, message: String) -> Error {
        Error::Solver {
            context: self.context,
            message,
        }
    }
}

pub fn relative_residual(a: &CsrMatrix, x: &[f64], b: &[f64]) -> f64 {
    if x.iter().any(|v| !v.is_finite()) {
        return f64::INFINITY;
    }
    let ax = a.matvec(x);
    let r = ax.iter().zip(b).fold(0.0f64, |m, (p, q)| m.max((p - q).abs()));
    let bn = inf_norm(b);
    if bn > 0.0 {
        r / bn
    } else {
        r
    }
}

/// Compressed-column copy of a CSR matrix: `(col_ptr, row_idx, values)`.
pub fn to_csc(a: &CsrMatrix) -> (Vec<usize>, Vec<usize>, Vec<f64>) {
    let (m, n) = (a.nrows(), a.ncols());
    let mut col_ptr = vec![0usize; n + 1];
    for &j in a.col_idx() {
        col_ptr[j + 1] += 1;
    }
    for j in 0..n {
        col_ptr[j + 1] += col_ptr[j];
    }
    let mut next = col_ptr.clone();
    let mut row_idx = vec![0usize; a.nnz()];
    let mut vals = vec![0.0; a.nnz()];
    for i in 0..m {
        for k in a.row_ptr()[i]..a.row_ptr()[i + 1] {
            let j = a.col_idx()[k];
            row_idx[next[j]] = i;
            vals[next[j]] = a.values()[k];
            next[j] += 1;
        }
    }
    (col_ptr, row_idx, vals)
}

/// ILU(0) factors stored on the pattern of `a`; tiny pivots are replaced so
/// that saddle-point blocks with empty diagonals do not break down.
struct Ilu0 {
    a: CsrMatrix,
    values: Vec<f64>,
    diag: Vec<usize>,
}

impl Ilu0 {
    fn new(a: &CsrMatrix) -> std::result::Result<Self, String> {
        let n = a.nrows();
        // store every diagonal entry, zero if absent
        let mut b = TripletBuilder::with_capacity(n, n, a.nnz() + n);
        for (i, j, v) in a.iter() {
            b.push(i, j, v);
        }
        for i in 0..n {
            b.push(i, i, 0.0);
        }
        let a = &b.build();
        let rp = a.row_ptr();
        let ci = a.col_idx();
        let mut v = a.values().to_vec();
        let scale = a.max_abs().max(f64::MIN_POSITIVE);
        let diag: Vec<usize> = (0..n)
            .map(|i| rp[i] + ci[rp[i]..rp[i + 1]].binary_search(&i).expect("diagonal stored"))
            .collect();
        let mut pos = vec![usize::MAX; n];
        for i in 0..n {
            for k in rp[i]..rp[i + 1] {
                pos[ci[k]] = k;
            }
            for k in rp[i]..diag[i] {
                let j = ci[k];
                let piv = v[diag[j]];
                v[k] /= piv;
                let lik = v[k];
                for kk in diag[j] + 1..rp[j + 1] {
                    let p = pos[ci[kk]];
                    if p != usize::MAX {
                        v[p] -= lik * v[kk];
                    }
                }
            }
            if v[diag[i]].abs() < 1e-12 * scale {
                v[diag[i]] = if v[diag[i]] < 0.0 { -1e-8 } else { 1e-8 } * scale;
            }
            for k in rp[i]..rp[i + 1] {
                pos[ci[k]] = usize::MAX;
            }
        }
        Ok(Ilu0 {
            a: a.clone(),
            values: v,
            diag,
        })
    }

    fn apply(&self, r: &[f64]) -> Vec<f64> {
        let n = r.len();
        let rp = self.a.row_ptr();
        let ci = self.a.col_idx();
        let mut y = r.to_vec();
        for i in 0..n {
            let mut s = y[i];
            for k in rp[i]..self.diag[i] {
                s -= self.values[k] * y[ci[k]];
            }
            y[i] = s;
        }
        for i in (0..n).rev() {
            let mut s = y[i];
            for k in self.diag[i] + 1..rp[i + 1] {
                s -= self.values[k] * y[ci[k]];
            }
            y[i] = s / self.values[self.diag[i]];
        }
        y
    }
}

/// Right-preconditioned restarted GMRES; stops when `|b - A x|_2 <= tol |b|_2`.
pub fn gmres_ilu0(
    a: &CsrMatrix,
    b: &[f64],
    tol: f64,
    max_iter: usize,
    restart: usize,
) -> std::result::Result<Vec<f64>, String> {
    let n = b.len();
    let ilu = Ilu0::new(a)?;
    let bnorm = norm2(b);
    let mut x = vec![0.0; n];
    let restart = restart.max(1);
    let mut iters = 0;
    loop {
        let ax = a.matvec(&x);
        let r: Vec<f64> = b.iter().zip(&ax).map(|(p, q)| p - q).collect();
        let beta = norm2(&r);
        if beta <= tol * bnorm {
            return Ok(x);
        }
        if iters >= max_iter {
            return Err(format!(
                "GMRES did not reach {tol:e} in {max_iter} iterations (relative residual {:e})",
                beta / bnorm
            ));
        }
        let mut v: Vec<Vec<f64>> = vec![r.iter().map(|ri| ri / beta).collect()];
        let mut h = vec![vec![0.0; restart]; restart + 1];
        let (mut cs, mut sn) = (vec![0.0; restart], vec![0.0; restart]);
        let mut g = vec![0.0; restart + 1];
        g[0] = beta;
        let mut k_used = 0;
        for k in 0..restart {
            iters += 1;
            let mut w = a.matvec(&ilu.apply(&v[k]));
            for (i, vi) in v.iter().enumerate() {
                let hik = dot(&w, vi);
                h[i][k] = hik;
                w.iter_mut().zip(vi).for_each(|(wj, vj)| *wj -= hik * vj);
            }
            let hn = norm2(&w);
            h[k + 1][k] = hn;
            for i in 0..k {
                let t = cs[i] * h[i][k] + sn[i] * h[i + 1][k];
                h[i + 1][k] = -sn[i] * h[i][k] + cs[i] * h[i + 1][k];
                h[i][k] = t;
            }
            let d = h[k][k].hypot(h[k + 1][k]);
            cs[k] = if d == 0.0 { 1.0 } else { h[k][k] / d };
            sn[k] = if d == 0.0 { 0.0 } else { h[k + 1][k] / d };
            h[k][k] = d;
            h[k + 1][k] = 0.0;
            g[k + 1] = -sn[k] * g[k];
            g[k] *= cs[k];
            k_used = k + 1;
            if g[k + 1].abs() <= tol * bnorm || hn == 0.0 || iters >= max_iter {
                break;
            }
            v.push(w.iter().map(|wi| wi / hn).collect());
        }
        let mut y = vec![0.0; k_used];
        for i in (0..k_used).rev() {
            let mut s = g[i];
            for j in i + 1..k_used {
                s -= h[i][j] * y[j];
            }
            y[i] = s / h[i][i];
        }
        let mut dz = vec![0.0; n];
        for (j, yj) in y.iter().enumerate() {
            dz.iter_mut().zip(&v[j]).for_each(|(d, vj)| *d += yj * vj);
        }
        let dx = ilu.apply(&dz);
        x.iter_mut().zip(&dx).for_each(|(xi, di)| *xi += di);
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm2(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}
