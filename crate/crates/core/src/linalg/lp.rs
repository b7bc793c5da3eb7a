use super::LinalgError;
use crate::tolerances::{LP_MAX_ITER, LP_PIVOT};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Maximize,
    Minimize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VarDomain {
    /// Variables are unrestricted in sign.
    Free,
    /// `x ≥ 0`.
    NonNegative,
}

/// Optimize `cᵀx` subject to `A x ≤ b`.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearProgram {
    pub a: Vec<Vec<f64>>,
    pub b: Vec<f64>,
    pub c: Vec<f64>,
    pub sense: Sense,
    pub domain: VarDomain,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution {
    pub value: f64,
    pub x: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum LpOutcome {
    Optimal(LpSolution),
    Infeasible,
    Unbounded,
}

impl LpOutcome {
    pub fn optimal(self) -> Option<LpSolution> {
        match self {
            LpOutcome::Optimal(s) => Some(s),
            _ => None,
        }
    }
}

impl LinearProgram {
    /// Free variables; validates shapes.
    pub fn new(a: Vec<Vec<f64>>, b: Vec<f64>, c: Vec<f64>, sense: Sense) -> Result<Self, LinalgError> {
        let lp = Self { a, b, c, sense, domain: VarDomain::Free };
        lp.validate()?;
        Ok(lp)
    }

    pub fn with_domain(mut self, domain: VarDomain) -> Self {
        self.domain = domain;
        self
    }

    fn validate(&self) -> Result<(), LinalgError> {
        if self.a.len() != self.b.len() {
            return Err(LinalgError::Shape(format!(
                "{} constraint rows but {} right-hand sides",
                self.a.len(),
                self.b.len()
            )));
        }
        if let Some(r) = self.a.iter().position(|r| r.len() != self.c.len()) {
            return Err(LinalgError::Shape(format!(
                "row {r} has {} columns, objective has {}",
                self.a[r].len(),
                self.c.len()
            )));
        }
        let finite = self.a.iter().flatten().chain(&self.b).chain(&self.c).all(|x| x.is_finite());
        if !finite {
            return Err(LinalgError::NonFinite("linear program"));
        }
        Ok(())
    }
}

/// Dense tableau. Column layout: structural columns, then one slack per
/// row, then artificials. `cost` holds reduced costs (minimization form)
/// and `cost_rhs` holds the negated objective value.
struct Tableau {
    rows: Vec<Vec<f64>>,
    rhs: Vec<f64>,
    cost: Vec<f64>,
    cost_rhs: f64,
    basis: Vec<usize>,
    /// Columns allowed to enter the basis.
    active: Vec<bool>,
}

enum Step {
    Optimal,
    Unbounded,
}

impl Tableau {
    fn pivot(&mut self, r: usize, col: usize) {
        let p = self.rows[r][col];
        for x in self.rows[r].iter_mut() {
            *x /= p;
        }
        self.rhs[r] /= p;
        let prow = self.rows[r].clone();
        let prhs = self.rhs[r];
        for i in 0..self.rows.len() {
            if i == r {
                continue;
            }
            let f = self.rows[i][col];
            if f != 0.0 {
                for (x, y) in self.rows[i].iter_mut().zip(&prow) {
                    *x -= f * y;
                }
                self.rhs[i] -= f * prhs;
                self.rows[i][col] = 0.0;
            }
        }
        let f = self.cost[col];
        if f != 0.0 {
            for (x, y) in self.cost.iter_mut().zip(&prow) {
                *x -= f * y;
            }
            self.cost_rhs -= f * prhs;
            self.cost[col] = 0.0;
        }
        self.basis[r] = col;
    }

    /// Bland's rule: lowest-index improving column; ratio ties broken by
    /// lowest basic index.
    fn run(&mut self) -> Result<Step, LinalgError> {
        for _ in 0..LP_MAX_ITER {
            let Some(col) = (0..self.cost.len()).find(|&j| self.active[j] && self.cost[j] < -LP_PIVOT)
            else {
                return Ok(Step::Optimal);
            };
            let mut best: Option<(usize, f64)> = None;
            for i in 0..self.rows.len() {
                let aij = self.rows[i][col];
                if aij > LP_PIVOT {
                    let ratio = self.rhs[i] / aij;
                    best = match best {
                        None => Some((i, ratio)),
                        Some((bi, br)) => {
                            if ratio < br - 1e-12 * br.abs().max(1.0)
                                || (ratio <= br + 1e-12 * br.abs().max(1.0) && self.basis[i] < self.basis[bi])
                            {
                                Some((i, ratio))
                            } else {
                                Some((bi, br))
                            }
                        }
                    };
                }
            }
            let Some((r, _)) = best else { return Ok(Step::Unbounded) };
            self.pivot(r, col);
        }
        Err(LinalgError::IterationLimit(LP_MAX_ITER))
    }
}

/// Two-phase dense simplex with Bland's rule.
pub fn solve_lp(lp: &LinearProgram) -> Result<LpOutcome, LinalgError> {
    lp.validate()?;
    let m = lp.b.len();
    let n = lp.c.len();
    // Structural columns: x itself, or (x⁺, x⁻) when free.
    let ns = match lp.domain {
        VarDomain::Free => 2 * n,
        VarDomain::NonNegative => n,
    };
    let neg_rows: Vec<usize> = (0..m).filter(|&i| lp.b[i] < 0.0).collect();
    let na = neg_rows.len();
    let width = ns + m + na;

    let mut rows = vec![vec![0.0; width]; m];
    let mut rhs = vec![0.0; m];
    let mut basis = vec![0; m];
    for i in 0..m {
        let sign = if lp.b[i] < 0.0 { -1.0 } else { 1.0 };
        for j in 0..n {
            rows[i][j] = sign * lp.a[i][j];
            if lp.domain == VarDomain::Free {
                rows[i][n + j] = -sign * lp.a[i][j];
            }
        }
        rows[i][ns + i] = sign;
        rhs[i] = sign * lp.b[i];
        basis[i] = ns + i;
    }
    for (k, &i) in neg_rows.iter().enumerate() {
        rows[i][ns + m + k] = 1.0;
        basis[i] = ns + m + k;
    }

    let mut t = Tableau {
        rows,
        rhs,
        cost: vec![0.0; width],
        cost_rhs: 0.0,
        basis,
        active: vec![true; width],
    };

    if na > 0 {
        // Phase 1: minimize the sum of artificials.
        for &i in &neg_rows {
            for j in 0..width {
                t.cost[j] -= t.rows[i][j];
            }
            t.cost_rhs -= t.rhs[i];
        }
        for k in 0..na {
            t.cost[ns + m + k] = 0.0;
        }
        t.run()?;
        let infeasibility = -t.cost_rhs;
        let scale = 1.0 + lp.b.iter().fold(0.0f64, |a, x| a.max(x.abs()));
        if infeasibility > 1e-9 * scale {
            return Ok(LpOutcome::Infeasible);
        }
        // Drive zero-level artificials out of the basis.
        for r in 0..m {
            if t.basis[r] >= ns + m {
                if let Some(col) = (0..ns + m).find(|&j| t.rows[r][j].abs() > LP_PIVOT) {
                    t.pivot(r, col);
                }
            }
        }
        for j in ns + m..width {
            t.active[j] = false;
        }
    }

    // Phase 2 in minimization form.
    let sign = match lp.sense {
        Sense::Minimize => 1.0,
        Sense::Maximize => -1.0,
    };
    let mut cost = vec![0.0; width];
    for j in 0..n {
        cost[j] = sign * lp.c[j];
        if lp.domain == VarDomain::Free {
            cost[n + j] = -sign * lp.c[j];
        }
    }
    let mut cost_rhs = 0.0;
    for r in 0..m {
        let cb = cost[t.basis[r]];
        if cb != 0.0 {
            for j in 0..width {
                cost[j] -= cb * t.rows[r][j];
            }
            cost_rhs -= cb * t.rhs[r];
        }
    }
    t.cost = cost;
    t.cost_rhs = cost_rhs;
    if let Step::Unbounded = t.run()? {
        return Ok(LpOutcome::Unbounded);
    }

    let mut y = vec![0.0; width];
    for r in 0..m {
        y[t.basis[r]] = t.rhs[r].max(0.0);
    }
    let x: Vec<f64> = match lp.domain {
        VarDomain::Free => (0..n).map(|j| y[j] - y[n + j]).collect(),
        VarDomain::NonNegative => y[..n].to_vec(),
    };
    let value = lp.c.iter().zip(&x).map(|(c, x)| c * x).sum();
    Ok(LpOutcome::Optimal(LpSolution { value, x }))
}
