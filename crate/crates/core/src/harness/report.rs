use std::fmt;

/// A failed instance: the input needed to rerun it, and what went wrong.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Failure {
    pub input: String,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    Pass,
    Fail(String),
    /// Fuel ran out before the question was settled.
    Inconclusive,
    /// The instance does not meet the statement's hypotheses.
    Skip,
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct LemmaReport {
    pub lemma: String,
    pub tried: usize,
    pub passed: usize,
    pub inconclusive: usize,
    pub failures: Vec<Failure>,
}

impl LemmaReport {
    pub fn new(lemma: &str) -> LemmaReport {
        LemmaReport { lemma: lemma.to_owned(), ..LemmaReport::default() }
    }

    pub fn record(&mut self, input: impl FnOnce() -> String, outcome: Outcome) {
        match outcome {
            Outcome::Skip => return,
            Outcome::Pass => self.passed += 1,
            Outcome::Inconclusive => self.inconclusive += 1,
            Outcome::Fail(detail) => self.failures.push(Failure { input: input(), detail }),
        }
        self.tried += 1;
    }

    /// Combine two reports; associative, keeps the order of failures.
    pub fn merge(mut self, other: LemmaReport) -> LemmaReport {
        if self.lemma.is_empty() {
            self.lemma = other.lemma.clone();
        }
        self.tried += other.tried;
        self.passed += other.passed;
        self.inconclusive += other.inconclusive;
        self.failures.extend(other.failures);
        self
    }

    pub fn failed(&self) -> usize {
        self.failures.len()
    }

    /// No failures and nothing left undecided.
    pub fn ok(&self) -> bool {
        self.failures.is_empty() && self.inconclusive == 0
    }

    pub fn summary(&self) -> String {
        format!(
            "{}: tried {}, passed {}, failed {}, inconclusive {}",
            self.lemma,
            self.tried,
            self.passed,
            self.failed(),
            self.inconclusive
        )
    }
}

impl fmt::Display for LemmaReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.summary())?;
        for fl in &self.failures {
            write!(f, "\n  FAIL {}\n    {}", fl.input, fl.detail.replace('\n', "\n    "))?;
        }
        Ok(())
    }
}
