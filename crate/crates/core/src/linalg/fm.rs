//! Exact feasibility of small linear systems by Fourier–Motzkin elimination.

use std::collections::HashMap;

use super::rat::Rat;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Relation {
    Le,
    Lt,
    Eq,
}

/// `coeffs · x  REL  rhs`
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Constraint {
    pub coeffs: Vec<Rat>,
    pub relation: Relation,
    pub rhs: Rat,
}

impl Constraint {
    pub fn new(coeffs: Vec<Rat>, relation: Relation, rhs: Rat) -> Constraint {
        Constraint { coeffs, relation, rhs }
    }

    pub fn le(coeffs: Vec<Rat>, rhs: Rat) -> Constraint {
        Constraint::new(coeffs, Relation::Le, rhs)
    }

    pub fn lt(coeffs: Vec<Rat>, rhs: Rat) -> Constraint {
        Constraint::new(coeffs, Relation::Lt, rhs)
    }

    pub fn eq(coeffs: Vec<Rat>, rhs: Rat) -> Constraint {
        Constraint::new(coeffs, Relation::Eq, rhs)
    }

    /// Whether a concrete point satisfies the constraint.
    pub fn holds_at(&self, x: &[Rat]) -> bool {
        let lhs: Rat = self.coeffs.iter().zip(x).map(|(a, v)| a * v).sum();
        match self.relation {
            Relation::Le => lhs <= self.rhs,
            Relation::Lt => lhs < self.rhs,
            Relation::Eq => lhs == self.rhs,
        }
    }
}

/// Inequality `a·x ≤ b` (or `<` when `strict`).
#[derive(Clone)]
struct Ineq {
    a: Vec<Rat>,
    b: Rat,
    strict: bool,
}

/// Is there a rational `x ∈ ℚ^vars` satisfying every constraint?
///
/// Equalities are substituted away first; the remaining inequalities are
/// eliminated one variable at a time, keeping only the tightest inequality per
/// normalized direction.
pub fn lp_feasible(constraints: &[Constraint], vars: usize) -> bool {
    let mut eqs: Vec<(Vec<Rat>, Rat)> = Vec::new();
    let mut ineqs: Vec<Ineq> = Vec::new();
    for c in constraints {
        assert_eq!(c.coeffs.len(), vars, "constraint arity");
        match c.relation {
            Relation::Eq => eqs.push((c.coeffs.clone(), c.rhs.clone())),
            Relation::Le => ineqs.push(Ineq { a: c.coeffs.clone(), b: c.rhs.clone(), strict: false }),
            Relation::Lt => ineqs.push(Ineq { a: c.coeffs.clone(), b: c.rhs.clone(), strict: true }),
        }
    }

    // substitute equalities: pick a variable, express it, and eliminate it everywhere
    while let Some((a, b)) = eqs.pop() {
        let Some(v) = a.iter().position(|x| !x.is_zero()) else {
            if !b.is_zero() {
                return false;
            }
            continue;
        };
        let piv = a[v].clone();
        let substitute = |coeffs: &mut Vec<Rat>, rhs: &mut Rat| {
            let f = &coeffs[v] / &piv;
            if f.is_zero() {
                return;
            }
            for (c, av) in coeffs.iter_mut().zip(&a) {
                *c -= &(&f * av);
            }
            *rhs -= &(&f * &b);
        };
        for (ea, eb) in eqs.iter_mut() {
            substitute(ea, eb);
        }
        for q in ineqs.iter_mut() {
            substitute(&mut q.a, &mut q.b);
        }
    }

    let mut system = match prune(ineqs) {
        Some(s) => s,
        None => return false,
    };
    for v in 0..vars {
        let (mut pos, mut neg, mut rest) = (Vec::new(), Vec::new(), Vec::new());
        for q in system {
            if q.a[v].is_positive() {
                pos.push(q);
            } else if q.a[v].is_negative() {
                neg.push(q);
            } else {
                rest.push(q);
            }
        }
        for p in &pos {
            for n in &neg {
                // p/|p_v| + n/|n_v| cancels variable v
                let sp = p.a[v].recip();
                let sn = -n.a[v].recip();
                let a: Vec<Rat> = p.a.iter().zip(&n.a).map(|(x, y)| x * &sp + y * &sn).collect();
                let b = &p.b * &sp + &n.b * &sn;
                rest.push(Ineq { a, b, strict: p.strict || n.strict });
            }
        }
        system = match prune(rest) {
            Some(s) => s,
            None => return false,
        };
    }
    system.is_empty()
}

/// Drop trivial rows and keep the tightest row per direction; `None` when a
/// trivial row is violated.
fn prune(ineqs: Vec<Ineq>) -> Option<Vec<Ineq>> {
    let mut best: HashMap<Vec<Rat>, (Rat, bool)> = HashMap::new();
    let mut order: Vec<Vec<Rat>> = Vec::new();
    for q in ineqs {
        let Some(lead) = q.a.iter().find(|x| !x.is_zero()).map(Rat::abs) else {
            let ok = if q.strict { q.b.is_positive() } else { !q.b.is_negative() };
            if !ok {
                return None;
            }
            continue;
        };
        let a: Vec<Rat> = q.a.iter().map(|x| x / &lead).collect();
        let b = &q.b / &lead;
        match best.get_mut(&a) {
            Some(slot) => {
                if b < slot.0 || (b == slot.0 && q.strict) {
                    *slot = (b, q.strict);
                }
            }
            None => {
                order.push(a.clone());
                best.insert(a, (b, q.strict));
            }
        }
    }
    Some(
        order
            .into_iter()
            .map(|a| {
                let (b, strict) = best[&a].clone();
                Ineq { a, b, strict }
            })
            .collect(),
    )
}
