use std::fmt;

/// The axioms checked for dg-algebras and dg-modules.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Axiom {
    Associativity,
    Unit,
    Grading,
    DegreePlusOne,
    SquareZero,
    Leibniz,
    DifferentialOfUnit,
}

impl Axiom {
    pub fn name(&self) -> &'static str {
        match self {
            Axiom::Associativity => "associativity",
            Axiom::Unit => "unit",
            Axiom::Grading => "grading",
            Axiom::DegreePlusOne => "degree+1",
            Axiom::SquareZero => "square-zero",
            Axiom::Leibniz => "leibniz",
            Axiom::DifferentialOfUnit => "d(1)=0",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AxiomCheck {
    pub axiom: Axiom,
    /// Basis indices of a violating tuple; `None` when the axiom holds.
    pub witness: Option<Vec<usize>>,
}

impl AxiomCheck {
    pub fn passed(&self) -> bool {
        self.witness.is_none()
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct VerificationReport {
    pub checks: Vec<AxiomCheck>,
}

impl VerificationReport {
    pub(crate) fn record(&mut self, axiom: Axiom, witness: Option<Vec<usize>>) {
        self.checks.push(AxiomCheck { axiom, witness });
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(AxiomCheck::passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &AxiomCheck> {
        self.checks.iter().filter(|c| !c.passed())
    }

    pub fn check(&self, axiom: Axiom) -> Option<&AxiomCheck> {
        self.checks.iter().find(|c| c.axiom == axiom)
    }

    pub fn holds(&self, axiom: Axiom) -> bool {
        self.check(axiom).is_some_and(AxiomCheck::passed)
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            match &c.witness {
                None => writeln!(f, "{:<14} pass", c.axiom.name())?,
                Some(w) => writeln!(f, "{:<14} FAIL at {:?}", c.axiom.name(), w)?,
            }
        }
        Ok(())
    }
}

/// A vector written as a combination of named basis elements, e.g.
/// "e11 - 1/2 e12"; the zero vector prints as "0".
pub fn format_vector(names: &[String], v: &[crate::ring::Q]) -> String {
    use num_traits::{One, Signed, Zero};
    let mut out = String::new();
    for (name, x) in names.iter().zip(v) {
        if x.is_zero() {
            continue;
        }
        let sign = if x.is_negative() { "-" } else { "+" };
        let mag = x.abs();
        if out.is_empty() {
            if x.is_negative() {
                out.push('-');
            }
        } else {
            out.push_str(&format!(" {sign} "));
        }
        if mag.is_one() {
            out.push_str(name);
        } else {
            out.push_str(&format!("{mag} {name}"));
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}
