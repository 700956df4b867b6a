use std::fmt;

use super::rules::{redexes, step, RuleSet, StepLabel};
use crate::syntax::{Position, Term};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceStep {
    pub pos: Position,
    pub label: StepLabel,
    /// The term after the step.
    pub term: Term,
}

/// A reduction sequence from `start`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Trace {
    pub start: Term,
    pub steps: Vec<TraceStep>,
}

impl Trace {
    pub fn new(start: Term) -> Trace {
        Trace { start, steps: Vec::new() }
    }

    pub fn push(&mut self, pos: Position, label: StepLabel, term: Term) {
        self.steps.push(TraceStep { pos, label, term });
    }

    pub fn end(&self) -> &Term {
        self.steps.last().map_or(&self.start, |s| &s.term)
    }

    pub fn terms(&self) -> impl Iterator<Item = &Term> {
        std::iter::once(&self.start).chain(self.steps.iter().map(|s| &s.term))
    }

    /// Number of steps.
    pub fn lg(&self) -> usize {
        self.steps.len()
    }

    /// Number of β and μ steps.
    pub fn lg_bm(&self) -> usize {
        self.steps.iter().filter(|s| s.label.rule.is_beta_mu()).count()
    }

    /// Append `other`, which must start where this trace ends.
    pub fn extend(&mut self, other: Trace) {
        self.steps.extend(other.steps);
    }

    /// Replay every step and confirm it lands on the recorded term.
    pub fn replay(&self) -> Result<(), String> {
        let mut cur = self.start.clone();
        for (i, s) in self.steps.iter().enumerate() {
            let (label, next) = step(&cur, &s.pos).map_err(|e| format!("step {}: {e}", i + 1))?;
            if label != s.label || !crate::syntax::alpha_eq(&next.erase(), &s.term.erase()) {
                return Err(format!("step {} does not reproduce {}", i + 1, s.term));
            }
            cur = s.term.clone();
        }
        Ok(())
    }
}

impl fmt::Display for Trace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "0: {}", self.start)?;
        for (i, s) in self.steps.iter().enumerate() {
            writeln!(f, "{}: {}@{} -> {}", i + 1, s.label, s.pos, s.term)?;
        }
        write!(f, "lg={} lg_bm={}", self.lg(), self.lg_bm())
    }
}

/// Leftmost-outermost reduction for at most `fuel` steps. The flag says
/// whether a normal form was reached.
pub fn normalize(m: &Term, rs: RuleSet, fuel: usize) -> (Trace, bool) {
    let mut trace = Trace::new(m.clone());
    for _ in 0..fuel {
        let cur = trace.end();
        let Some((pos, _)) = redexes(cur, rs).into_iter().next() else {
            return (trace, true);
        };
        let (label, next) = step(cur, &pos).expect("redex was just found");
        trace.push(pos, label, next);
    }
    let normal = redexes(trace.end(), rs).is_empty();
    (trace, normal)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_term_any;

    #[test]
    fn normalize_and_print() {
        let m = parse_term_any("(\\x. (x x) \\y. y)").unwrap();
        let (tr, normal) = normalize(&m, RuleSet::BETA, 10);
        assert!(normal);
        assert_eq!(tr.lg(), 2);
        assert_eq!(tr.lg_bm(), 2);
        assert_eq!(tr.end(), &parse_term_any("\\y. y").unwrap());
        let text = tr.to_string();
        assert!(text.starts_with("0: "));
        assert!(text.contains("1: beta@root -> "));
        assert!(text.ends_with("lg=2 lg_bm=2"));
        tr.replay().unwrap();
    }

    #[test]
    fn fuel_runs_out_on_omega() {
        let m = parse_term_any("(\\x. (x x) \\x. (x x))").unwrap();
        let (tr, normal) = normalize(&m, RuleSet::BETA, 5);
        assert!(!normal);
        assert_eq!(tr.lg(), 5);
    }
}
