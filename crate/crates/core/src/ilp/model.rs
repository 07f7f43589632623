use crate::instance::{Instance, MANIPULATOR};

/// Binary variable `x[item][step]`: `item` is picked at `step`. Both 0-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Var {
    pub item: usize,
    pub step: usize,
}

impl Var {
    /// LP name, 1-based.
    pub fn name(&self) -> String {
        format!("x_{}_{}", self.item + 1, self.step + 1)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Eq,
    Ge,
}

/// `sum(terms) (= | >=) rhs`; every coefficient is 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Row {
    pub name: String,
    pub terms: Vec<Var>,
    pub sense: Sense,
    pub rhs: u64,
}

impl Row {
    fn holds(&self, assignment: &[usize]) -> bool {
        let lhs = self.terms.iter().filter(|v| assignment[v.step] == v.item).count() as u64;
        match self.sense {
            Sense::Eq => lhs == self.rhs,
            Sense::Ge => lhs >= self.rhs,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IpModel {
    pub num_items: usize,
    /// `(coefficient, variable)` for every item at every manipulator step.
    pub objective: Vec<(u64, Var)>,
    /// One row per item, then one per step.
    pub eq_rows: Vec<Row>,
    /// For each non-manipulator step and item `i`: `i` is picked now, or
    /// something the picker likes better is picked now, or `i` went earlier.
    pub greedy_rows: Vec<Row>,
}

impl IpModel {
    pub fn num_vars(&self) -> usize {
        self.num_items * self.num_items
    }

    pub fn rows(&self) -> impl Iterator<Item = &Row> {
        self.eq_rows.iter().chain(&self.greedy_rows)
    }

    /// Steps carrying an objective term, in increasing order.
    pub fn manipulator_steps(&self) -> Vec<usize> {
        let mut steps: Vec<usize> = self.objective.iter().map(|(_, v)| v.step).collect();
        steps.dedup();
        steps
    }

    /// Objective coefficient of each item, if the manipulator has any step.
    pub fn item_values(&self) -> Option<Vec<u64>> {
        let first = self.objective.first()?.1.step;
        let mut values = vec![0; self.num_items];
        for &(c, v) in self.objective.iter().filter(|(_, v)| v.step == first) {
            values[v.item] = c;
        }
        Some(values)
    }

    /// `assignment[t]` is the item picked at step `t`.
    pub fn is_feasible(&self, assignment: &[usize]) -> bool {
        assignment.len() == self.num_items
            && assignment.iter().all(|&i| i < self.num_items)
            && self.rows().all(|r| r.holds(assignment))
    }

    pub fn evaluate(&self, assignment: &[usize]) -> u64 {
        self.objective
            .iter()
            .filter(|(_, v)| assignment[v.step] == v.item)
            .map(|(c, _)| c)
            .sum()
    }
}

pub fn build_model(instance: &Instance) -> IpModel {
    let m = instance.num_items();
    let var = |item, step| Var { item, step };

    let objective = (0..m)
        .filter(|&t| instance.picker(t) == MANIPULATOR)
        .flat_map(|t| (0..m).map(move |i| (instance.utility(i), var(i, t))))
        .collect();

    let mut eq_rows = Vec::with_capacity(2 * m);
    for i in 0..m {
        eq_rows.push(Row {
            name: format!("item_{}", i + 1),
            terms: (0..m).map(|t| var(i, t)).collect(),
            sense: Sense::Eq,
            rhs: 1,
        });
    }
    for t in 0..m {
        eq_rows.push(Row {
            name: format!("step_{}", t + 1),
            terms: (0..m).map(|i| var(i, t)).collect(),
            sense: Sense::Eq,
            rhs: 1,
        });
    }

    let mut greedy_rows = Vec::new();
    for t in 0..m {
        let a = instance.picker(t);
        if a == MANIPULATOR {
            continue;
        }
        let row = instance.ranking(a);
        for i in 0..m {
            let mut terms = vec![var(i, t)];
            terms.extend(row[..instance.position(a, i)].iter().map(|&j| var(j, t)));
            terms.extend((0..t).rev().map(|s| var(i, s)));
            greedy_rows.push(Row {
                name: format!("greedy_{}_{}", i + 1, t + 1),
                terms,
                sense: Sense::Ge,
                rhs: 1,
            });
        }
    }

    IpModel {
        num_items: m,
        objective,
        eq_rows,
        greedy_rows,
    }
}
