//! Small dense two-phase simplex over [`Scalar`], used by the feasibility
//! search. Problems have the form `a . x <= b` with `x >= 0`; phase one
//! minimizes artificial infeasibility, phase two optionally maximizes a
//! linear objective. Bland's rule keeps pivoting cycle-free, which makes the
//! exact-rational instantiation a decision procedure.

use crate::scalar::Scalar;

/// `rows[i] = (a_i, b_i)` encoding `a_i . x <= b_i`; `x >= 0` is implicit.
pub(crate) struct DenseLp<S> {
    pub n_vars: usize,
    pub rows: Vec<(Vec<S>, S)>,
}

pub(crate) enum LpResult<S> {
    Feasible(Vec<S>),
    Infeasible,
}

const MAX_PIVOTS: usize = 100_000;

struct Tableau<S> {
    /// m rows by (cols + 1) entries; last entry is the rhs.
    rows: Vec<Vec<S>>,
    /// Reduced-cost row, same width; last entry is minus the objective.
    cost: Vec<S>,
    basis: Vec<usize>,
    n_structural: usize,
    art_start: usize,
    cols: usize,
    eps: S,
}

impl<S: Scalar> Tableau<S> {
    fn rhs(&self, r: usize) -> &S {
        &self.rows[r][self.cols]
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let inv = self.rows[r][c].clone();
        for v in self.rows[r].iter_mut() {
            *v = v.clone() / inv.clone();
        }
        let pivot_row = self.rows[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r || row[c] == S::zero() {
                continue;
            }
            let factor = row[c].clone();
            for (v, pv) in row.iter_mut().zip(pivot_row.iter()) {
                *v = v.clone() - factor.clone() * pv.clone();
            }
        }
        if self.cost[c] != S::zero() {
            let factor = self.cost[c].clone();
            for (v, pv) in self.cost.iter_mut().zip(pivot_row.iter()) {
                *v = v.clone() - factor.clone() * pv.clone();
            }
        }
        self.basis[r] = c;
    }

    /// Bland's rule: lowest eligible entering column, lowest basis index on
    /// ratio ties. `allow_artificial` gates the artificial columns.
    fn iterate(&mut self, allow_artificial: bool) -> Result<(), &'static str> {
        for _ in 0..MAX_PIVOTS {
            let limit = if allow_artificial { self.cols } else { self.art_start };
            let entering = (0..limit).find(|&c| self.cost[c] < S::zero() - self.eps.clone());
            let Some(e) = entering else { return Ok(()) };

            let mut leaving: Option<(usize, S)> = None; // (row, ratio)
            for r in 0..self.rows.len() {
                if self.rows[r][e] <= self.eps {
                    continue;
                }
                let ratio = self.rhs(r).clone() / self.rows[r][e].clone();
                let better = match &leaving {
                    None => true,
                    Some((br, best)) => {
                        ratio < *best || (ratio == *best && self.basis[r] < self.basis[*br])
                    }
                };
                if better {
                    leaving = Some((r, ratio));
                }
            }
            match leaving {
                Some((r, _)) => self.pivot(r, e),
                // Unbounded objective cannot happen on the box-bounded
                // feasibility programs this solver serves; stop at the
                // current (feasible) point.
                None => return Ok(()),
            }
        }
        Err("simplex pivot limit exceeded")
    }
}

/// Solve the program; with an objective, maximize it over the feasible set.
pub(crate) fn solve<S: Scalar>(lp: &DenseLp<S>, objective: Option<&[S]>, eps: &S) -> LpResult<S> {
    let m = lp.rows.len();
    let n = lp.n_vars;
    let slack_start = n;
    let art_start = n + m;
    let needs_artificial: Vec<bool> = lp.rows.iter().map(|(_, b)| *b < S::zero()).collect();
    let n_art = needs_artificial.iter().filter(|&&x| x).count();
    let cols = art_start + n_art;

    let mut rows: Vec<Vec<S>> = Vec::with_capacity(m);
    let mut basis = Vec::with_capacity(m);
    let mut art_col = art_start;
    for (i, (a, b)) in lp.rows.iter().enumerate() {
        let mut row = vec![S::zero(); cols + 1];
        let negate = needs_artificial[i];
        for (j, v) in a.iter().enumerate() {
            row[j] = if negate { S::zero() - v.clone() } else { v.clone() };
        }
        row[slack_start + i] = if negate { S::zero() - S::one() } else { S::one() };
        row[cols] = if negate { S::zero() - b.clone() } else { b.clone() };
        if negate {
            row[art_col] = S::one();
            basis.push(art_col);
            art_col += 1;
        } else {
            basis.push(slack_start + i);
        }
        rows.push(row);
    }

    // Phase one: minimize the sum of artificials.
    let mut cost = vec![S::zero(); cols + 1];
    for c in art_start..cols {
        cost[c] = S::one();
    }
    let mut t = Tableau {
        rows,
        cost,
        basis,
        n_structural: n,
        art_start,
        cols,
        eps: eps.clone(),
    };
    for r in 0..m {
        if t.basis[r] >= art_start {
            let row = t.rows[r].clone();
            for (v, rv) in t.cost.iter_mut().zip(row.iter()) {
                *v = v.clone() - rv.clone();
            }
        }
    }
    if t.iterate(true).is_err() {
        return LpResult::Infeasible;
    }
    // cost[cols] holds minus the phase-one objective.
    let infeasibility = S::zero() - t.cost[t.cols].clone();
    if infeasibility > *eps {
        return LpResult::Infeasible;
    }

    // Drive leftover artificials out of the basis; rows that cannot be
    // pivoted are redundant and get dropped.
    let mut r = 0;
    while r < t.rows.len() {
        if t.basis[r] >= t.art_start {
            let col = (0..t.art_start).find(|&c| t.rows[r][c].abs() > *eps);
            match col {
                Some(c) => t.pivot(r, c),
                None => {
                    t.rows.remove(r);
                    t.basis.remove(r);
                    continue;
                }
            }
        }
        r += 1;
    }

    if let Some(obj) = objective {
        debug_assert_eq!(obj.len(), n);
        // Maximize obj . x == minimize (-obj) . x.
        t.cost = vec![S::zero(); t.cols + 1];
        for (j, c) in obj.iter().enumerate() {
            t.cost[j] = S::zero() - c.clone();
        }
        for r in 0..t.rows.len() {
            let b = t.basis[r];
            if t.cost[b] != S::zero() {
                let factor = t.cost[b].clone();
                let row = t.rows[r].clone();
                for (v, rv) in t.cost.iter_mut().zip(row.iter()) {
                    *v = v.clone() - factor.clone() * rv.clone();
                }
            }
        }
        // Every intermediate basis stays feasible, so even if the pivot cap
        // were hit the current point is a valid answer.
        let _ = t.iterate(false);
    }

    let mut x = vec![S::zero(); t.n_structural];
    for (r, &b) in t.basis.iter().enumerate() {
        if b < t.n_structural {
            x[b] = t.rhs(r).clone();
        }
    }
    LpResult::Feasible(x)
}
