//! Exact rational linear programming.
//!
//! A bounded-variable primal simplex over arbitrary-precision rationals:
//! two-phase initialization with artificial variables, Bland's smallest-index
//! rule for anti-cycling, and variable bounds handled implicitly rather than
//! as rows. Every optimal solve is checked against its own optimality
//! certificate (primal feasibility, dual sign conditions, complementary
//! slackness, and exact strong duality) before it is returned.
//!
//! The solver returns basic solutions: the primal point is a vertex of the
//! row-restricted polytope, which [`is_vertex_of`] can confirm independently
//! by a rank computation on the tight constraints.

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::Rat;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Sense {
    Minimize,
    Maximize,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Relation {
    Ge,
    Le,
    Eq,
}

#[derive(Clone, Debug)]
pub struct Row {
    pub coeffs: Vec<(usize, Rat)>,
    pub relation: Relation,
    pub rhs: Rat,
}

#[derive(Clone, Debug)]
pub struct LinearProgram {
    num_vars: usize,
    sense: Sense,
    objective: Vec<Rat>,
    rows: Vec<Row>,
    lower: Vec<Option<Rat>>,
    upper: Vec<Option<Rat>>,
}

impl LinearProgram {
    /// New program with zero objective and default bounds `[0, +inf)`.
    pub fn new(num_vars: usize, sense: Sense) -> Self {
        LinearProgram {
            num_vars,
            sense,
            objective: vec![Rat::zero(); num_vars],
            rows: Vec::new(),
            lower: vec![Some(Rat::zero()); num_vars],
            upper: vec![None; num_vars],
        }
    }

    pub fn set_objective(&mut self, var: usize, coeff: Rat) {
        self.objective[var] = coeff;
    }

    /// `None` means unbounded on that side.
    pub fn set_bounds(&mut self, var: usize, lower: Option<Rat>, upper: Option<Rat>) {
        self.lower[var] = lower;
        self.upper[var] = upper;
    }

    pub fn add_row(&mut self, coeffs: Vec<(usize, Rat)>, relation: Relation, rhs: Rat) {
        self.rows.push(Row {
            coeffs,
            relation,
            rhs,
        });
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Row] {
        &self.rows
    }

    pub fn objective(&self) -> &[Rat] {
        &self.objective
    }

    pub fn sense(&self) -> Sense {
        self.sense
    }

    pub fn bounds(&self, var: usize) -> (Option<&Rat>, Option<&Rat>) {
        (self.lower[var].as_ref(), self.upper[var].as_ref())
    }

    fn validate(&self) -> Result<()> {
        for row in &self.rows {
            for (j, _) in &row.coeffs {
                if *j >= self.num_vars {
                    return Err(Error::InvalidInput(format!(
                        "row references variable {j} but the program has {}",
                        self.num_vars
                    )));
                }
            }
        }
        for j in 0..self.num_vars {
            if let (Some(lo), Some(up)) = (&self.lower[j], &self.upper[j]) {
                if lo > up {
                    return Err(Error::InvalidInput(format!(
                        "variable {j} has lower bound above upper bound"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Dense coefficient row over the structural variables.
    fn dense_row(&self, i: usize) -> Vec<Rat> {
        let mut dense = vec![Rat::zero(); self.num_vars];
        for (j, c) in &self.rows[i].coeffs {
            dense[*j] += c;
        }
        dense
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Status {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum BasisVar {
    Structural(usize),
    Slack(usize),
    Artificial(usize),
}

/// A basic optimal solution (or an infeasibility/unboundedness verdict).
#[derive(Clone, Debug)]
pub struct VertexSolution {
    pub status: Status,
    /// Structural variable values; empty unless optimal.
    pub primal: Vec<Rat>,
    /// Objective value in the program's own sense; zero unless optimal.
    pub value: Rat,
    /// One dual per row, in the program's own sense; empty unless optimal.
    pub duals: Vec<Rat>,
    /// The basic variable of each row at termination; empty unless optimal.
    pub basis: Vec<BasisVar>,
}

impl VertexSolution {
    fn verdict(status: Status) -> Self {
        VertexSolution {
            status,
            primal: Vec::new(),
            value: Rat::zero(),
            duals: Vec::new(),
            basis: Vec::new(),
        }
    }
}

/// Which finite bound nonbasic variables start on.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub enum StartPolicy {
    #[default]
    LowerFirst,
    UpperFirst,
}

#[derive(Clone, Debug)]
pub struct SimplexOptions {
    pub start: StartPolicy,
    pub max_pivots: usize,
}

impl Default for SimplexOptions {
    fn default() -> Self {
        SimplexOptions {
            start: StartPolicy::LowerFirst,
            max_pivots: 0, // 0 = derive from problem size
        }
    }
}

pub fn solve(lp: &LinearProgram) -> Result<VertexSolution> {
    solve_with(lp, &SimplexOptions::default())
}

pub fn solve_with(lp: &LinearProgram, options: &SimplexOptions) -> Result<VertexSolution> {
    lp.validate()?;
    let mut tableau = Tableau::build(lp, options)?;

    if tableau.has_artificials() {
        tableau.load_phase_one_costs();
        match tableau.run()? {
            LoopEnd::Optimal => {}
            LoopEnd::Unbounded => {
                return Err(Error::Internal(
                    "phase-1 objective reported unbounded".into(),
                ));
            }
        }
        if !tableau.objective_value().is_zero() {
            return Ok(VertexSolution::verdict(Status::Infeasible));
        }
        tableau.retire_artificials();
    }

    tableau.load_phase_two_costs();
    match tableau.run()? {
        LoopEnd::Optimal => {}
        LoopEnd::Unbounded => return Ok(VertexSolution::verdict(Status::Unbounded)),
    }

    let solution = tableau.extract();
    verify_certificate(lp, &solution)?;
    Ok(solution)
}

enum LoopEnd {
    Optimal,
    Unbounded,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum VarState {
    Basic(usize),
    AtLower,
    AtUpper,
    /// Free variable resting at zero; becomes basic and never returns.
    FreeAtZero,
}

struct Tableau<'a> {
    lp: &'a LinearProgram,
    nv: usize,
    m: usize,
    ncols: usize,
    lower: Vec<Option<Rat>>,
    upper: Vec<Option<Rat>>,
    t: Vec<Vec<Rat>>,
    xb: Vec<Rat>,
    basic: Vec<usize>,
    state: Vec<VarState>,
    cost: Vec<Rat>,
    artificial_start: usize,
    pivots_left: usize,
}

impl<'a> Tableau<'a> {
    fn build(lp: &'a LinearProgram, options: &SimplexOptions) -> Result<Self> {
        let nv = lp.num_vars();
        let m = lp.num_rows();

        // Structural variables, then one slack per row, then artificials.
        let mut lower: Vec<Option<Rat>> = lp.lower.clone();
        let mut upper: Vec<Option<Rat>> = lp.upper.clone();
        for row in lp.rows() {
            match row.relation {
                Relation::Le => {
                    lower.push(Some(Rat::zero()));
                    upper.push(None);
                }
                Relation::Ge => {
                    lower.push(None);
                    upper.push(Some(Rat::zero()));
                }
                Relation::Eq => {
                    lower.push(Some(Rat::zero()));
                    upper.push(Some(Rat::zero()));
                }
            }
        }

        let mut state: Vec<VarState> = Vec::with_capacity(nv + m);
        for j in 0..nv {
            state.push(initial_state(&lower[j], &upper[j], options.start));
        }

        // Start values of the structural variables.
        let x0: Vec<Rat> = (0..nv)
            .map(|j| nonbasic_value(&state[j], &lower[j], &upper[j]))
            .collect();

        let mut t: Vec<Vec<Rat>> = Vec::with_capacity(m);
        let mut xb: Vec<Rat> = Vec::with_capacity(m);
        let mut basic: Vec<usize> = Vec::with_capacity(m);
        let mut artificial_rows: Vec<(usize, bool)> = Vec::new(); // (row, negate)

        for i in 0..m {
            let dense = lp.dense_row(i);
            let activity: Rat = dense
                .iter()
                .zip(&x0)
                .filter(|(c, _)| !c.is_zero())
                .map(|(c, x)| c * x)
                .sum();
            let residual = &lp.rows[i].rhs - &activity;

            let slack = nv + i;
            let slack_feasible = within(&residual, &lower[slack], &upper[slack]);
            let mut row: Vec<Rat> = dense;
            row.resize(nv + m, Rat::zero());
            row[slack] = Rat::one();

            if slack_feasible {
                basic.push(slack);
                xb.push(residual);
                state.push(VarState::Basic(i));
            } else {
                // Slack pinned at zero; an artificial absorbs the residual.
                state.push(match lp.rows[i].relation {
                    Relation::Ge => VarState::AtUpper,
                    _ => VarState::AtLower,
                });
                let negate = residual.is_negative();
                if negate {
                    for c in row.iter_mut() {
                        if !c.is_zero() {
                            *c = -std::mem::take(c);
                        }
                    }
                    xb.push(-residual);
                } else {
                    xb.push(residual);
                }
                artificial_rows.push((i, negate));
                basic.push(usize::MAX); // patched below
            }
            t.push(row);
        }

        let artificial_start = nv + m;
        let ncols = artificial_start + artificial_rows.len();
        for row in t.iter_mut() {
            row.resize(ncols, Rat::zero());
        }
        for (a, (i, _)) in artificial_rows.iter().enumerate() {
            let col = artificial_start + a;
            t[*i][col] = Rat::one();
            basic[*i] = col;
            state.push(VarState::Basic(*i));
            lower.push(Some(Rat::zero()));
            upper.push(None);
        }

        let max_pivots = if options.max_pivots > 0 {
            options.max_pivots
        } else {
            10_000 + 200 * (m + ncols)
        };

        Ok(Tableau {
            lp,
            nv,
            m,
            ncols,
            lower,
            upper,
            t,
            xb,
            basic,
            state,
            cost: vec![Rat::zero(); ncols],
            artificial_start,
            pivots_left: max_pivots,
        })
    }

    fn has_artificials(&self) -> bool {
        self.ncols > self.artificial_start
    }

    fn load_phase_one_costs(&mut self) {
        self.cost = vec![Rat::zero(); self.ncols];
        for j in self.artificial_start..self.ncols {
            self.cost[j] = Rat::one();
        }
    }

    fn load_phase_two_costs(&mut self) {
        self.cost = vec![Rat::zero(); self.ncols];
        for j in 0..self.nv {
            self.cost[j] = match self.lp.sense() {
                Sense::Minimize => self.lp.objective()[j].clone(),
                Sense::Maximize => -self.lp.objective()[j].clone(),
            };
        }
    }

    /// Drives basic artificials out of the basis where possible, then pins
    /// every artificial to zero for phase 2. An artificial that stays basic
    /// marks a redundant row and remains fixed at value zero.
    fn retire_artificials(&mut self) {
        for i in 0..self.m {
            if self.basic[i] < self.artificial_start {
                continue;
            }
            debug_assert!(self.xb[i].is_zero());
            let target = (0..self.artificial_start)
                .find(|&j| !matches!(self.state[j], VarState::Basic(_)) && !self.t[i][j].is_zero());
            if let Some(j) = target {
                self.forced_pivot(i, j);
            }
        }
        for j in self.artificial_start..self.ncols {
            self.lower[j] = Some(Rat::zero());
            self.upper[j] = Some(Rat::zero());
        }
    }

    fn value_of(&self, j: usize) -> Rat {
        match self.state[j] {
            VarState::Basic(i) => self.xb[i].clone(),
            _ => nonbasic_value(&self.state[j], &self.lower[j], &self.upper[j]),
        }
    }

    fn objective_value(&self) -> Rat {
        (0..self.ncols)
            .filter(|&j| !self.cost[j].is_zero())
            .map(|j| &self.cost[j] * self.value_of(j))
            .sum()
    }

    fn reduced_cost(&self, j: usize, basic_costs: &[(usize, Rat)]) -> Rat {
        let mut d = self.cost[j].clone();
        for (i, c) in basic_costs {
            if !self.t[*i][j].is_zero() {
                d -= c * &self.t[*i][j];
            }
        }
        d
    }

    fn run(&mut self) -> Result<LoopEnd> {
        loop {
            if self.pivots_left == 0 {
                return Err(Error::Internal("simplex pivot cap exceeded".into()));
            }

            let basic_costs: Vec<(usize, Rat)> = (0..self.m)
                .filter(|&i| !self.cost[self.basic[i]].is_zero())
                .map(|i| (i, self.cost[self.basic[i]].clone()))
                .collect();

            // Bland: smallest eligible nonbasic index enters.
            let mut entering: Option<(usize, i32)> = None;
            for j in 0..self.ncols {
                match self.state[j] {
                    VarState::Basic(_) => continue,
                    _ => {
                        if is_fixed(&self.lower[j], &self.upper[j]) {
                            continue;
                        }
                    }
                }
                let d = self.reduced_cost(j, &basic_costs);
                let dir = match self.state[j] {
                    VarState::AtLower if d.is_negative() => 1,
                    VarState::AtUpper if d.is_positive() => -1,
                    VarState::FreeAtZero if d.is_negative() => 1,
                    VarState::FreeAtZero if d.is_positive() => -1,
                    _ => continue,
                };
                entering = Some((j, dir));
                break;
            }
            let Some((j, dir)) = entering else {
                return Ok(LoopEnd::Optimal);
            };

            // Ratio test: how far can x_j move before a basic variable or
            // its own opposite bound blocks.
            let span: Option<Rat> = match (&self.lower[j], &self.upper[j]) {
                (Some(lo), Some(up)) => Some(up - lo),
                _ => None,
            };
            let mut best: Option<Rat> = None;
            let mut leave: Option<usize> = None;
            for i in 0..self.m {
                if self.t[i][j].is_zero() {
                    continue;
                }
                // Rate of change of xb[i] per unit step of x_j.
                let g = if dir > 0 {
                    -self.t[i][j].clone()
                } else {
                    self.t[i][j].clone()
                };
                let b = self.basic[i];
                let limit: Option<Rat> = if g.is_negative() {
                    self.lower[b].as_ref().map(|lo| (&self.xb[i] - lo) / -&g)
                } else {
                    self.upper[b].as_ref().map(|up| (up - &self.xb[i]) / &g)
                };
                let Some(limit) = limit else { continue };
                debug_assert!(!limit.is_negative());
                let better = match &best {
                    None => true,
                    Some(cur) => {
                        limit < *cur
                            || (limit == *cur
                                && leave.is_some_and(|r| self.basic[i] < self.basic[r]))
                    }
                };
                if better {
                    best = Some(limit);
                    leave = Some(i);
                }
            }

            self.pivots_left -= 1;
            match (best, span) {
                (None, None) => return Ok(LoopEnd::Unbounded),
                (None, Some(t_span)) => self.bound_flip(j, dir, t_span),
                (Some(t_row), Some(t_span)) if t_span < t_row => self.bound_flip(j, dir, t_span),
                (Some(t_row), _) => {
                    let r = leave.expect("ratio row recorded with its limit");
                    self.pivot(r, j, dir, &t_row);
                }
            }
        }
    }

    fn bound_flip(&mut self, j: usize, dir: i32, t: Rat) {
        debug_assert!(!t.is_negative());
        for i in 0..self.m {
            if !self.t[i][j].is_zero() {
                let delta = &self.t[i][j] * &t;
                if dir > 0 {
                    self.xb[i] -= delta;
                } else {
                    self.xb[i] += delta;
                }
            }
        }
        self.state[j] = match self.state[j] {
            VarState::AtLower => VarState::AtUpper,
            VarState::AtUpper => VarState::AtLower,
            _ => unreachable!("only bounded nonbasic variables flip"),
        };
    }

    fn pivot(&mut self, r: usize, j: usize, dir: i32, t: &Rat) {
        let entering_value = {
            let v = self.value_of(j);
            if dir > 0 {
                v + t
            } else {
                v - t
            }
        };
        for i in 0..self.m {
            if i != r && !self.t[i][j].is_zero() {
                let delta = &self.t[i][j] * t;
                if dir > 0 {
                    self.xb[i] -= delta;
                } else {
                    self.xb[i] += delta;
                }
            }
        }
        let leaving = self.basic[r];
        let leaving_value = {
            let delta = &self.t[r][j] * t;
            if dir > 0 {
                &self.xb[r] - delta
            } else {
                &self.xb[r] + delta
            }
        };
        self.state[leaving] =
            state_at_bound(&leaving_value, &self.lower[leaving], &self.upper[leaving]);
        self.eliminate(r, j);
        self.basic[r] = j;
        self.state[j] = VarState::Basic(r);
        self.xb[r] = entering_value;
    }

    /// Pivot used only to clean artificials out of the basis; no value moves.
    fn forced_pivot(&mut self, r: usize, j: usize) {
        let leaving = self.basic[r];
        let entering_value = self.value_of(j);
        debug_assert_eq!(self.xb[r], Rat::zero());
        self.state[leaving] =
            state_at_bound(&Rat::zero(), &self.lower[leaving], &self.upper[leaving]);
        self.eliminate(r, j);
        self.basic[r] = j;
        self.state[j] = VarState::Basic(r);
        self.xb[r] = entering_value;
    }

    fn eliminate(&mut self, r: usize, j: usize) {
        let piv = self.t[r][j].clone();
        if !piv.is_one() {
            let inv = piv.recip();
            for c in self.t[r].iter_mut() {
                if !c.is_zero() {
                    *c *= &inv;
                }
            }
        }
        let pivot_row = std::mem::take(&mut self.t[r]);
        for (i, row) in self.t.iter_mut().enumerate() {
            if i == r || row[j].is_zero() {
                continue;
            }
            let f = row[j].clone();
            for (c, p) in row.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *c -= &f * p;
                }
            }
            debug_assert!(row[j].is_zero());
        }
        self.t[r] = pivot_row;
    }

    fn extract(&self) -> VertexSolution {
        let primal: Vec<Rat> = (0..self.nv).map(|j| self.value_of(j)).collect();
        let value: Rat = self
            .lp
            .objective()
            .iter()
            .zip(&primal)
            .filter(|(c, _)| !c.is_zero())
            .map(|(c, x)| c * x)
            .sum();

        // y = c_B B^{-1}; the slack column of row i is B^{-1} e_i.
        let basic_costs: Vec<(usize, Rat)> = (0..self.m)
            .filter(|&i| !self.cost[self.basic[i]].is_zero())
            .map(|i| (i, self.cost[self.basic[i]].clone()))
            .collect();
        let duals: Vec<Rat> = (0..self.m)
            .map(|i| {
                let mut y = Rat::zero();
                for (r, c) in &basic_costs {
                    if !self.t[*r][self.nv + i].is_zero() {
                        y += c * &self.t[*r][self.nv + i];
                    }
                }
                match self.lp.sense() {
                    Sense::Minimize => y,
                    Sense::Maximize => -y,
                }
            })
            .collect();

        let basis: Vec<BasisVar> = self
            .basic
            .iter()
            .map(|&j| {
                if j < self.nv {
                    BasisVar::Structural(j)
                } else if j < self.nv + self.m {
                    BasisVar::Slack(j - self.nv)
                } else {
                    BasisVar::Artificial(j - self.nv - self.m)
                }
            })
            .collect();

        VertexSolution {
            status: Status::Optimal,
            primal,
            value,
            duals,
            basis,
        }
    }
}

fn initial_state(lower: &Option<Rat>, upper: &Option<Rat>, policy: StartPolicy) -> VarState {
    match (lower, upper, policy) {
        (Some(_), Some(_), StartPolicy::UpperFirst) => VarState::AtUpper,
        (Some(_), _, _) => VarState::AtLower,
        (None, Some(_), _) => VarState::AtUpper,
        (None, None, _) => VarState::FreeAtZero,
    }
}

fn nonbasic_value(state: &VarState, lower: &Option<Rat>, upper: &Option<Rat>) -> Rat {
    match state {
        VarState::AtLower => lower.clone().expect("lower bound exists"),
        VarState::AtUpper => upper.clone().expect("upper bound exists"),
        VarState::FreeAtZero => Rat::zero(),
        VarState::Basic(_) => unreachable!("nonbasic_value on basic variable"),
    }
}

fn within(value: &Rat, lower: &Option<Rat>, upper: &Option<Rat>) -> bool {
    lower.as_ref().is_none_or(|lo| value >= lo) && upper.as_ref().is_none_or(|up| value <= up)
}

fn is_fixed(lower: &Option<Rat>, upper: &Option<Rat>) -> bool {
    matches!((lower, upper), (Some(lo), Some(up)) if lo == up)
}

fn state_at_bound(value: &Rat, lower: &Option<Rat>, upper: &Option<Rat>) -> VarState {
    if lower.as_ref() == Some(value) {
        VarState::AtLower
    } else if upper.as_ref() == Some(value) {
        VarState::AtUpper
    } else {
        unreachable!("leaving variable did not land on a bound")
    }
}

/// Exact optimality certificate: primal feasibility, dual sign conditions,
/// complementary slackness, and strong duality with bound contributions.
fn verify_certificate(lp: &LinearProgram, sol: &VertexSolution) -> Result<()> {
    let fail = |msg: &str| Err(Error::Internal(format!("optimality certificate: {msg}")));

    // Work in minimize convention.
    let (c, y): (Vec<Rat>, Vec<Rat>) = match lp.sense() {
        Sense::Minimize => (lp.objective().to_vec(), sol.duals.clone()),
        Sense::Maximize => (
            lp.objective().iter().map(|v| -v).collect(),
            sol.duals.iter().map(|v| -v).collect(),
        ),
    };
    let x = &sol.primal;

    let mut dual_objective = Rat::zero();
    for (i, row) in lp.rows().iter().enumerate() {
        let lhs: Rat = row.coeffs.iter().map(|(j, coef)| coef * &x[*j]).sum();
        let ok = match row.relation {
            Relation::Ge => lhs >= row.rhs,
            Relation::Le => lhs <= row.rhs,
            Relation::Eq => lhs == row.rhs,
        };
        if !ok {
            return fail(&format!("row {i} infeasible"));
        }
        match row.relation {
            Relation::Ge if y[i].is_negative() => return fail(&format!("row {i} dual sign")),
            Relation::Le if y[i].is_positive() => return fail(&format!("row {i} dual sign")),
            _ => {}
        }
        if !y[i].is_zero() && lhs != row.rhs {
            return fail(&format!("row {i} slack with nonzero dual"));
        }
        dual_objective += &y[i] * &row.rhs;
    }

    let mut reduced = c;
    for (i, row) in lp.rows().iter().enumerate() {
        if y[i].is_zero() {
            continue;
        }
        for (j, coef) in &row.coeffs {
            reduced[*j] -= &y[i] * coef;
        }
    }
    for j in 0..lp.num_vars() {
        let (lo, up) = lp.bounds(j);
        if !within(&x[j], &lp.lower[j], &lp.upper[j]) {
            return fail(&format!("variable {j} out of bounds"));
        }
        if reduced[j].is_positive() {
            match lo {
                Some(lo) if &x[j] == lo => dual_objective += &reduced[j] * lo,
                _ => return fail(&format!("variable {j}: positive reduced cost off lower")),
            }
        } else if reduced[j].is_negative() {
            match up {
                Some(up) if &x[j] == up => dual_objective += &reduced[j] * up,
                _ => return fail(&format!("variable {j}: negative reduced cost off upper")),
            }
        }
    }

    let primal_objective: Rat = lp.objective().iter().zip(x).map(|(c, x)| c * x).sum();
    let dual_objective = match lp.sense() {
        Sense::Minimize => dual_objective,
        Sense::Maximize => -dual_objective,
    };
    if primal_objective != dual_objective {
        return fail("strong duality gap");
    }
    if primal_objective != sol.value {
        return fail("reported value differs from objective at primal point");
    }
    Ok(())
}

/// True iff the constraints tight at `point` (rows satisfied with equality
/// plus active variable bounds) have full column rank, i.e. `point` is a
/// vertex of the feasible region.
pub fn is_vertex_of(lp: &LinearProgram, point: &[Rat]) -> bool {
    assert_eq!(point.len(), lp.num_vars());
    let mut tight: Vec<Vec<Rat>> = Vec::new();
    for (i, row) in lp.rows().iter().enumerate() {
        let lhs: Rat = row.coeffs.iter().map(|(j, c)| c * &point[*j]).sum();
        if lhs == row.rhs {
            tight.push(lp.dense_row(i));
        }
    }
    for j in 0..lp.num_vars() {
        let (lo, up) = lp.bounds(j);
        if lo == Some(&point[j]) || up == Some(&point[j]) {
            let mut unit = vec![Rat::zero(); lp.num_vars()];
            unit[j] = Rat::one();
            tight.push(unit);
        }
    }
    rank(tight, lp.num_vars()) == lp.num_vars()
}

fn rank(mut rows: Vec<Vec<Rat>>, width: usize) -> usize {
    let mut rank = 0;
    for col in 0..width {
        let Some(pivot_idx) = (rank..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, pivot_idx);
        let pivot_row = rows[rank].clone();
        let inv = pivot_row[col].clone().recip();
        for row in rows.iter_mut().skip(rank + 1) {
            if row[col].is_zero() {
                continue;
            }
            let f = &row[col] * &inv;
            for (c, p) in row.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *c -= &f * p;
                }
            }
        }
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rank
}
