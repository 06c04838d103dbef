//! Derived series and lower central series.

use serde::Serialize;

use super::{AlgebraError, PoissonAlgebra, ProductKind};
use crate::linalg::Subspace;

/// A descending chain of subspaces. `terms[0]` is the whole algebra; the
/// chain ends either at zero or with two equal terms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeriesResult {
    pub terms: Vec<Subspace>,
    /// True when the chain stopped at a nonzero fixed point.
    pub stabilized: bool,
    /// Number of product steps taken.
    pub steps: usize,
}

impl SeriesResult {
    pub fn reaches_zero(&self) -> bool {
        self.terms.last().is_some_and(Subspace::is_zero)
    }

    /// Steps until zero, if zero is reached.
    pub fn steps_to_zero(&self) -> Option<usize> {
        self.reaches_zero().then_some(self.steps)
    }

    pub fn dims(&self) -> Vec<usize> {
        self.terms.iter().map(Subspace::dim).collect()
    }

    fn from_iteration(
        first: Subspace,
        mut next: impl FnMut(&[Subspace]) -> Result<Subspace, AlgebraError>,
    ) -> Result<Self, AlgebraError> {
        let mut terms = vec![first];
        loop {
            let last = terms.last().expect("nonempty");
            if last.is_zero() {
                let steps = terms.len() - 1;
                return Ok(SeriesResult {
                    terms,
                    stabilized: false,
                    steps,
                });
            }
            let t = next(&terms)?;
            let repeat = &t == terms.last().expect("nonempty");
            terms.push(t);
            if repeat {
                let steps = terms.len() - 1;
                return Ok(SeriesResult {
                    terms,
                    stabilized: true,
                    steps,
                });
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SolvabilityClass {
    pub trivial_dot: bool,
    pub trivial_bracket: bool,
    pub solvable_steps: Option<usize>,
    pub nilpotent_steps: Option<usize>,
}

impl PoissonAlgebra {
    /// `A⁽⁰⁾ = A`, `A⁽ᵏ⁺¹⁾ = A⁽ᵏ⁾·A⁽ᵏ⁾ + [A⁽ᵏ⁾, A⁽ᵏ⁾]`.
    pub fn derived_series(&self) -> SeriesResult {
        SeriesResult::from_iteration(self.whole(), |terms| {
            let t = terms.last().expect("nonempty");
            self.product_space(t, t, ProductKind::Both)
        })
        .expect("ambient dimensions agree")
    }

    /// Lower central series with `A¹ = A` and
    /// `Aᵐ = Σ_{i+j=m} (Aⁱ·Aʲ + [Aⁱ, Aʲ])`.
    ///
    /// When the algebra satisfies the axioms, each term is also checked
    /// against the Poisson shortcut `Aᵐ⁺¹ = Aᵐ·A + [Aᵐ, A]`.
    pub fn lower_central_series(&self) -> Result<SeriesResult, AlgebraError> {
        let check = self.validated || self.validate().ok();
        let whole = self.whole();
        SeriesResult::from_iteration(whole.clone(), |terms| {
            let m = terms.len() + 1;
            let mut acc = Subspace::zero(&self.field, self.dim);
            for i in 1..m {
                let p = self.product_space(&terms[i - 1], &terms[m - i - 1], ProductKind::Both)?;
                acc = acc.sum(&p)?;
            }
            if check {
                let short =
                    self.product_space(terms.last().expect("nonempty"), &whole, ProductKind::Both)?;
                if short != acc {
                    return Err(AlgebraError::FormulaMismatch(m));
                }
            }
            Ok(acc)
        })
    }

    pub fn solvability_class(&self) -> Result<SolvabilityClass, AlgebraError> {
        Ok(SolvabilityClass {
            trivial_dot: self.dot_is_zero(),
            trivial_bracket: self.bracket_is_zero(),
            solvable_steps: self.derived_series().steps_to_zero(),
            nilpotent_steps: self.lower_central_series()?.steps_to_zero(),
        })
    }

    pub fn is_solvable(&self) -> bool {
        self.derived_series().reaches_zero()
    }

    /// Nilpotency via the shortcut recursion; needs no axiom check.
    pub fn is_nilpotent(&self) -> bool {
        let whole = self.whole();
        SeriesResult::from_iteration(whole.clone(), |terms| {
            self.product_space(terms.last().expect("nonempty"), &whole, ProductKind::Both)
        })
        .expect("ambient dimensions agree")
        .reaches_zero()
    }
}

#[cfg(test)]
mod tests {
    use super::super::tests::*;
    use super::*;
    use crate::field::FieldSpec;

    #[test]
    fn derived_series_examples() {
        let f = FieldSpec::Prime(5);
        let s = p3_14(&f).derived_series();
        assert_eq!(s.dims(), vec![3, 2, 0]);
        assert_eq!(s.terms[1], Subspace::coordinate(&f, 3, &[1, 2]));
        assert_eq!(s.steps_to_zero(), Some(2));

        let z = PoissonAlgebra::zero(&f, 3).derived_series();
        assert_eq!(z.dims(), vec![3, 0]);

        let s = p3_18(&f).derived_series();
        assert!(s.stabilized && !s.reaches_zero());
        assert_eq!(s.dims(), vec![3, 3]);
    }

    #[test]
    fn lower_central_examples() {
        let f = FieldSpec::Prime(5);
        let s = p4_7(&f).lower_central_series().unwrap();
        assert_eq!(
            s.terms,
            vec![
                p4_7(&f).whole(),
                Subspace::coordinate(&f, 4, &[3]),
                Subspace::zero(&f, 4)
            ]
        );
        assert_eq!(s.steps_to_zero(), Some(2));

        let s = p3_14(&f).lower_central_series().unwrap();
        assert!(s.stabilized);
        assert_eq!(s.terms.last().unwrap(), &Subspace::coordinate(&f, 3, &[2]));

        let z = PoissonAlgebra::zero(&f, 2).lower_central_series().unwrap();
        assert_eq!(z.dims(), vec![2, 0]);
    }

    #[test]
    fn solvability_examples() {
        let f = FieldSpec::Prime(5);
        let c = p4_7(&f).solvability_class().unwrap();
        assert_eq!(c.nilpotent_steps, Some(2));
        assert_eq!(c.solvable_steps, Some(2));
        assert!(!c.trivial_dot && !c.trivial_bracket);
        let c = p3_14(&f).solvability_class().unwrap();
        assert!(c.solvable_steps.is_some() && c.nilpotent_steps.is_none());
        assert!(p3_18(&f)
            .solvability_class()
            .unwrap()
            .solvable_steps
            .is_none());
        assert!(p4_14(&f).is_nilpotent());
    }

    #[test]
    fn series_terms_are_ideals() {
        let f = FieldSpec::Prime(3);
        for a in [p3_14(&f), p3_18(&f), p3_20(&f), p4_7(&f), p4_14(&f)] {
            for t in a
                .derived_series()
                .terms
                .iter()
                .chain(a.lower_central_series().unwrap().terms.iter())
            {
                assert!(a.classify_subspace(t).unwrap().ideal);
            }
        }
    }
}
