//! Signs of occurrences of recursion variables, and Mendler's positivity
//! condition on equation systems.

use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};
use std::fmt;

use super::{EquationSet, Type};

/// Join of the signs with which a variable occurs in a type.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Polarity {
    Absent,
    Positive,
    Negative,
    Both,
}

impl Polarity {
    pub fn join(self, other: Polarity) -> Polarity {
        use Polarity::*;
        match (self, other) {
            (Absent, p) | (p, Absent) => p,
            (a, b) if a == b => a,
            _ => Both,
        }
    }

    pub fn flip(self) -> Polarity {
        match self {
            Polarity::Positive => Polarity::Negative,
            Polarity::Negative => Polarity::Positive,
            p => p,
        }
    }

    fn of_sign(positive: bool) -> Polarity {
        if positive {
            Polarity::Positive
        } else {
            Polarity::Negative
        }
    }

    /// Membership in the set of types where the variable is positive.
    pub fn is_positive(self) -> bool {
        matches!(self, Polarity::Positive | Polarity::Absent)
    }

    pub fn is_negative(self) -> bool {
        matches!(self, Polarity::Negative | Polarity::Absent)
    }
}

impl fmt::Display for Polarity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Polarity::Absent => "absent",
            Polarity::Positive => "positive",
            Polarity::Negative => "negative",
            Polarity::Both => "both",
        })
    }
}

/// Syntactic polarity of the atom `x` in `a`.
pub fn polarity_of(x: &str, a: &Type) -> Polarity {
    match a {
        Type::Atom(y) if &**y == x => Polarity::Positive,
        Type::Atom(_) | Type::Bot => Polarity::Absent,
        Type::Arrow(l, r) => polarity_of(x, l).flip().join(polarity_of(x, r)),
        Type::And(l, r) | Type::Or(l, r) => polarity_of(x, l).join(polarity_of(x, r)),
    }
}

/// Polarity of `x` in `a`, looking through the equations of every other
/// recursion variable.
pub fn polarity_in(x: &str, a: &Type, eqs: &EquationSet) -> Polarity {
    let mut seen: HashSet<(Type, bool)> = HashSet::new();
    let mut todo = vec![(a.clone(), true)];
    let mut pol = Polarity::Absent;
    while let Some((t, sign)) = todo.pop() {
        if !seen.insert((t.clone(), sign)) {
            continue;
        }
        match &t {
            Type::Atom(y) if &**y == x => pol = pol.join(Polarity::of_sign(sign)),
            Type::Atom(y) => {
                if let Some(f) = eqs.get(y) {
                    todo.push((f.clone(), sign));
                }
            }
            Type::Bot => {}
            Type::Arrow(l, r) => {
                todo.push(((**l).clone(), !sign));
                todo.push(((**r).clone(), sign));
            }
            Type::And(l, r) | Type::Or(l, r) => {
                todo.push(((**l).clone(), sign));
                todo.push(((**r).clone(), sign));
            }
        }
    }
    pol
}

/// Outcome of the positivity check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Goodness {
    Good,
    /// A dependency cycle through `var` whose signs multiply to negative.
    /// `cycle` lists the variables along it, starting and ending at `var`,
    /// each edge tagged with the sign of the occurrence.
    NotGood {
        var: String,
        cycle: Vec<(String, bool)>,
    },
}

impl Goodness {
    pub fn is_good(&self) -> bool {
        matches!(self, Goodness::Good)
    }
}

impl fmt::Display for Goodness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Goodness::Good => f.write_str("good"),
            Goodness::NotGood { var, cycle } => {
                write!(f, "not good: negative cycle {var}")?;
                for (y, positive) in cycle {
                    write!(f, " -[{}]-> {y}", if *positive { "pos" } else { "neg" })?;
                }
                Ok(())
            }
        }
    }
}

/// Decide whether every type congruent to a recursion variable `X` lies in
/// the positive class of `X`.
///
/// Edges of the dependency graph go from `X` to each recursion variable `Y`
/// occurring in `F_X`, labelled with the sign of the occurrence. The system
/// is good iff no variable reaches itself with negative overall sign.
pub fn is_good(eqs: &EquationSet) -> Goodness {
    let edges: BTreeMap<&str, Vec<(&str, bool)>> = eqs
        .iter()
        .map(|(x, f)| {
            let mut out = Vec::new();
            for y in eqs.vars() {
                let p = polarity_of(y, f);
                if matches!(p, Polarity::Positive | Polarity::Both) {
                    out.push((y, true));
                }
                if matches!(p, Polarity::Negative | Polarity::Both) {
                    out.push((y, false));
                }
            }
            (x, out)
        })
        .collect();
    for x in eqs.vars() {
        // breadth-first over (variable, accumulated sign)
        let mut parent: HashMap<(&str, bool), Option<((&str, bool), bool)>> = HashMap::new();
        let mut queue = VecDeque::new();
        parent.insert((x, true), None);
        queue.push_back((x, true));
        let mut hit = None;
        'search: while let Some((y, sign)) = queue.pop_front() {
            for &(z, edge) in &edges[y] {
                let next = (z, sign == edge);
                if next == (x, false) {
                    hit = Some(((y, sign), edge));
                    break 'search;
                }
                if let std::collections::hash_map::Entry::Vacant(e) = parent.entry(next) {
                    e.insert(Some(((y, sign), edge)));
                    queue.push_back(next);
                }
            }
        }
        if let Some((mut from, edge)) = hit {
            let mut cycle = vec![(x.to_owned(), edge)];
            while let Some(Some((prev, e))) = parent.get(&from) {
                cycle.push((from.0.to_owned(), *e));
                from = *prev;
            }
            cycle.reverse();
            return Goodness::NotGood { var: x.to_owned(), cycle };
        }
    }
    Goodness::Good
}
