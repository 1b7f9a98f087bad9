//! Convex combinations of atoms, the state every solver in this crate mutates.

use crate::atom::Atom;
use crate::error::{Error, Result};
use crate::linalg;
use crate::trace::StepKind;

/// Weights below this are removed and the remaining mass renormalized.
pub const WEIGHT_FLOOR: f64 = 1e-14;
/// A pairwise step with `lambda >= lambda_max - DROP_TOLERANCE` is a drop step.
pub const DROP_TOLERANCE: f64 = 1e-14;
/// The cached iterate is recomputed from the combination this often.
pub const REANCHOR_INTERVAL: usize = 100;

/// Result of scanning the active set against a gradient.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AwayLocal {
    /// Index of the atom maximizing `<grad, v>`.
    pub away: usize,
    /// Index of the atom minimizing `<grad, v>`.
    pub local: usize,
    pub away_score: f64,
    pub local_score: f64,
}

impl AwayLocal {
    pub fn pairwise_gap(&self) -> f64 {
        self.away_score - self.local_score
    }
}

/// Atoms with positive weights summing to one, plus the cached iterate
/// `x = sum_i c_i v_i`.
///
/// Atoms keep their insertion order, which is the tie-break order for the
/// away / local Frank-Wolfe scans. Point atoms have no ambient vector, so
/// for them the cached iterate is empty.
#[derive(Debug, Clone)]
pub struct ActiveSet {
    atoms: Vec<Atom>,
    weights: Vec<f64>,
    iterate: Vec<f64>,
    updates_since_anchor: usize,
}

impl ActiveSet {
    pub fn singleton(atom: Atom) -> Self {
        let iterate = atom.to_dense();
        ActiveSet { atoms: vec![atom], weights: vec![1.0], iterate, updates_since_anchor: 0 }
    }

    /// Builds a set from an explicit combination, validating every invariant.
    pub fn from_weighted(atoms: Vec<Atom>, weights: Vec<f64>) -> Result<Self> {
        if atoms.is_empty() || atoms.len() != weights.len() {
            return Err(Error::contract("active set needs as many weights as atoms, and at least one"));
        }
        let dim = atoms[0].ambient_len();
        if atoms.iter().any(|a| a.ambient_len() != dim) {
            return Err(Error::contract("atoms of different ambient dimensions"));
        }
        let mut set = ActiveSet { atoms, weights, iterate: vec![0.0; dim], updates_since_anchor: 0 };
        set.reanchor();
        set.check_invariants()?;
        Ok(set)
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn iterate(&self) -> &[f64] {
        &self.iterate
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Atom, f64)> {
        self.atoms.iter().zip(self.weights.iter().copied())
    }

    pub fn position(&self, atom: &Atom) -> Option<usize> {
        self.atoms.iter().position(|a| a == atom)
    }

    pub fn weight_of(&self, atom: &Atom) -> Option<f64> {
        self.position(atom).map(|i| self.weights[i])
    }

    /// The explicit combination `sum_i c_i v_i`, ignoring the cache.
    pub fn combination(&self) -> Vec<f64> {
        let mut x = vec![0.0; self.iterate.len()];
        for (a, w) in self.iter() {
            a.add_scaled_to(w, &mut x);
        }
        x
    }

    /// Renormalizes the weights and recomputes the cached iterate.
    pub fn reanchor(&mut self) {
        let total: f64 = self.weights.iter().sum();
        if total > 0.0 && total != 1.0 {
            self.weights.iter_mut().for_each(|w| *w /= total);
        }
        self.iterate = self.combination();
        self.updates_since_anchor = 0;
    }

    fn after_update(&mut self) {
        self.updates_since_anchor += 1;
        if self.updates_since_anchor >= REANCHOR_INTERVAL {
            self.reanchor();
        }
    }

    /// Away and local Frank-Wolfe atoms given per-atom scores `<grad, v_i>`.
    /// Ties go to the lowest insertion index.
    pub fn away_and_local(&self, scores: &[f64]) -> Result<AwayLocal> {
        if self.is_empty() {
            return Err(Error::contract("away/local scan over an empty active set"));
        }
        if scores.len() != self.len() {
            return Err(Error::DimensionMismatch { expected: self.len(), actual: scores.len() });
        }
        if !linalg::all_finite(scores) {
            return Err(Error::NonFinite("active-set scores"));
        }
        let (mut away, mut local) = (0, 0);
        for (i, &s) in scores.iter().enumerate().skip(1) {
            if s > scores[away] {
                away = i;
            }
            if s < scores[local] {
                local = i;
            }
        }
        Ok(AwayLocal { away, local, away_score: scores[away], local_score: scores[local] })
    }

    /// Away atom, local Frank-Wolfe atom and pairwise gap for an ambient
    /// gradient.
    pub fn away_and_local_fw(&self, grad: &[f64]) -> Result<(Atom, Atom, f64)> {
        if self.is_empty() {
            return Err(Error::contract("away/local scan over an empty active set"));
        }
        if grad.len() != self.iterate.len() {
            return Err(Error::DimensionMismatch { expected: self.iterate.len(), actual: grad.len() });
        }
        let scores: Vec<f64> = self.atoms.iter().map(|a| a.dot(grad)).collect();
        let al = self.away_and_local(&scores)?;
        Ok((self.atoms[al.away].clone(), self.atoms[al.local].clone(), al.pairwise_gap()))
    }

    /// Moves weight `lambda` from `away` to `toward`. `toward` is inserted if
    /// it is not active yet (global pairwise steps).
    pub fn apply_pairwise(&mut self, away: &Atom, toward: &Atom, lambda: f64) -> Result<StepKind> {
        let ia = self
            .position(away)
            .ok_or_else(|| Error::contract("pairwise step away from an inactive atom"))?;
        let lambda_max = self.weights[ia];
        if !(0.0..=lambda_max).contains(&lambda) {
            return Err(Error::contract(format!(
                "pairwise step length {lambda} outside [0, {lambda_max}]"
            )));
        }
        if away == toward {
            return Ok(StepKind::Descent);
        }
        let it = match self.position(toward) {
            Some(i) => i,
            None => {
                if toward.ambient_len() != self.iterate.len() {
                    return Err(Error::DimensionMismatch {
                        expected: self.iterate.len(),
                        actual: toward.ambient_len(),
                    });
                }
                self.atoms.push(toward.clone());
                self.weights.push(0.0);
                self.atoms.len() - 1
            }
        };
        let kind = if lambda >= lambda_max - DROP_TOLERANCE {
            self.weights[it] += lambda_max;
            away.add_scaled_to(-lambda_max, &mut self.iterate);
            toward.add_scaled_to(lambda_max, &mut self.iterate);
            self.atoms.remove(ia);
            self.weights.remove(ia);
            StepKind::Drop
        } else {
            self.weights[ia] -= lambda;
            self.weights[it] += lambda;
            away.add_scaled_to(-lambda, &mut self.iterate);
            toward.add_scaled_to(lambda, &mut self.iterate);
            StepKind::Descent
        };
        self.after_update();
        Ok(kind)
    }

    /// Frank-Wolfe update `x <- (1 - lambda) x + lambda w`.
    pub fn apply_fw(&mut self, w: Atom, lambda: f64) -> Result<()> {
        if !(0.0..=1.0).contains(&lambda) {
            return Err(Error::contract(format!("Frank-Wolfe step length {lambda} outside [0, 1]")));
        }
        if w.ambient_len() != self.iterate.len() {
            return Err(Error::DimensionMismatch { expected: self.iterate.len(), actual: w.ambient_len() });
        }
        if lambda >= 1.0 - DROP_TOLERANCE {
            *self = ActiveSet::singleton(w);
            return Ok(());
        }
        if lambda == 0.0 {
            return Ok(());
        }
        let keep = 1.0 - lambda;
        self.weights.iter_mut().for_each(|c| *c *= keep);
        self.iterate.iter_mut().for_each(|x| *x *= keep);
        match self.position(&w) {
            Some(i) => self.weights[i] += lambda,
            None => {
                self.atoms.push(w.clone());
                self.weights.push(lambda);
            }
        }
        w.add_scaled_to(lambda, &mut self.iterate);
        if !self.remove_below_floor() {
            self.after_update();
        }
        Ok(())
    }

    /// Away-step update `x <- (1 + lambda) x - lambda a` with
    /// `lambda <= c_a / (1 - c_a)`.
    pub fn apply_away(&mut self, away: &Atom, lambda: f64) -> Result<StepKind> {
        let ia = self
            .position(away)
            .ok_or_else(|| Error::contract("away step from an inactive atom"))?;
        let lambda_max = self.away_limit(ia);
        if !(0.0..=lambda_max).contains(&lambda) {
            return Err(Error::contract(format!("away step length {lambda} outside [0, {lambda_max}]")));
        }
        let grow = 1.0 + lambda;
        let kind = if lambda >= lambda_max - DROP_TOLERANCE {
            self.atoms.remove(ia);
            self.weights.remove(ia);
            self.weights.iter_mut().for_each(|c| *c *= grow);
            self.reanchor();
            StepKind::Drop
        } else {
            self.weights.iter_mut().for_each(|c| *c *= grow);
            self.weights[ia] -= lambda;
            self.iterate.iter_mut().for_each(|x| *x *= grow);
            away.add_scaled_to(-lambda, &mut self.iterate);
            if !self.remove_below_floor() {
                self.after_update();
            }
            StepKind::Descent
        };
        Ok(kind)
    }

    /// Largest admissible away-step length for the atom at `index`.
    pub fn away_limit(&self, index: usize) -> f64 {
        let c = self.weights[index];
        if c >= 1.0 {
            f64::INFINITY
        } else {
            c / (1.0 - c)
        }
    }

    /// Drops atoms whose weight fell below the floor; returns whether the
    /// set changed (in which case it was re-anchored).
    fn remove_below_floor(&mut self) -> bool {
        if self.weights.iter().all(|&w| w >= WEIGHT_FLOOR) {
            return false;
        }
        let mut i = 0;
        while i < self.weights.len() {
            if self.weights[i] < WEIGHT_FLOOR && self.weights.len() > 1 {
                self.weights.remove(i);
                self.atoms.remove(i);
            } else {
                i += 1;
            }
        }
        self.reanchor();
        true
    }

    /// Verifies positivity, unit mass, distinctness and cache consistency.
    pub fn check_invariants(&self) -> Result<()> {
        if self.is_empty() {
            return Err(Error::contract("empty active set"));
        }
        if let Some(w) = self.weights.iter().find(|&&w| !(w >= WEIGHT_FLOOR && w <= 1.0 + 1e-12)) {
            return Err(Error::contract(format!("weight {w} outside [{WEIGHT_FLOOR}, 1]")));
        }
        let total: f64 = self.weights.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::contract(format!("weights sum to {total}")));
        }
        for i in 0..self.atoms.len() {
            if self.atoms[i + 1..].contains(&self.atoms[i]) {
                return Err(Error::contract("duplicate atoms in active set"));
            }
        }
        let drift = linalg::max_abs_diff(&self.iterate, &self.combination());
        if drift > 1e-9 {
            return Err(Error::contract(format!("cached iterate drifted by {drift:e}")));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn e(n: usize, i: usize) -> Atom {
        Atom::basis(n, i)
    }

    fn weights_of(set: &ActiveSet, n: usize) -> Vec<f64> {
        (0..n).map(|i| set.weight_of(&e(n, i)).unwrap_or(0.0)).collect()
    }

    #[test]
    fn away_local_singleton() {
        let set = ActiveSet::singleton(e(3, 0));
        let (a, s, gap) = set.away_and_local_fw(&[0.3, -1.0, 2.0]).unwrap();
        assert_eq!((a, s, gap), (e(3, 0), e(3, 0), 0.0));
    }

    #[test]
    fn away_local_coordinate_extremes() {
        let set = ActiveSet::from_weighted(vec![e(3, 0), e(3, 1), e(3, 2)], vec![0.2, 0.3, 0.5]).unwrap();
        let (a, s, gap) = set.away_and_local_fw(&[3.0, 1.0, 2.0]).unwrap();
        assert_eq!((a, s, gap), (e(3, 0), e(3, 1), 2.0));
    }

    #[test]
    fn away_local_ties_take_lowest_index() {
        let set = ActiveSet::from_weighted(vec![e(2, 0), e(2, 1)], vec![0.5, 0.5]).unwrap();
        let (a, s, gap) = set.away_and_local_fw(&[5.0, 5.0]).unwrap();
        assert_eq!((a, s, gap), (e(2, 0), e(2, 0), 0.0));
    }

    #[test]
    fn away_local_empty_is_contract_violation() {
        let set = ActiveSet { atoms: vec![], weights: vec![], iterate: vec![], updates_since_anchor: 0 };
        assert!(matches!(set.away_and_local(&[]), Err(Error::ContractViolation(_))));
    }

    #[test]
    fn pairwise_descent_transfers_weight() {
        let mut set = ActiveSet::from_weighted(vec![e(2, 0), e(2, 1)], vec![0.5, 0.5]).unwrap();
        let kind = set.apply_pairwise(&e(2, 0), &e(2, 1), 0.2).unwrap();
        assert_eq!(kind, StepKind::Descent);
        let w = weights_of(&set, 2);
        assert!((w[0] - 0.3).abs() < 1e-15 && (w[1] - 0.7).abs() < 1e-15);
        set.check_invariants().unwrap();
    }

    #[test]
    fn pairwise_full_transfer_drops() {
        let mut set = ActiveSet::from_weighted(vec![e(2, 0), e(2, 1)], vec![0.5, 0.5]).unwrap();
        assert_eq!(set.apply_pairwise(&e(2, 0), &e(2, 1), 0.5).unwrap(), StepKind::Drop);
        assert_eq!(set.len(), 1);
        assert_eq!(set.weight_of(&e(2, 1)), Some(1.0));
        set.check_invariants().unwrap();
    }

    #[test]
    fn pairwise_zero_step_is_identity() {
        let mut set = ActiveSet::from_weighted(vec![e(2, 0), e(2, 1)], vec![0.5, 0.5]).unwrap();
        assert_eq!(set.apply_pairwise(&e(2, 0), &e(2, 1), 0.0).unwrap(), StepKind::Descent);
        assert_eq!(weights_of(&set, 2), vec![0.5, 0.5]);
    }

    #[test]
    fn pairwise_rejects_overlong_steps() {
        let mut set = ActiveSet::from_weighted(vec![e(2, 0), e(2, 1)], vec![0.5, 0.5]).unwrap();
        assert!(set.apply_pairwise(&e(2, 0), &e(2, 1), 0.6).is_err());
        assert!(set.apply_pairwise(&e(2, 0), &e(2, 1), -0.1).is_err());
    }

    #[test]
    fn fw_adds_new_atom() {
        let mut set = ActiveSet::singleton(e(2, 0));
        set.apply_fw(e(2, 1), 0.5).unwrap();
        assert_eq!(weights_of(&set, 2), vec![0.5, 0.5]);
    }

    #[test]
    fn fw_readds_existing_atom() {
        let mut set = ActiveSet::from_weighted(vec![e(2, 0), e(2, 1)], vec![0.4, 0.6]).unwrap();
        set.apply_fw(e(2, 0), 0.5).unwrap();
        let w = weights_of(&set, 2);
        assert!((w[0] - 0.7).abs() < 1e-15 && (w[1] - 0.3).abs() < 1e-15);
        assert_eq!(set.len(), 2);
    }

    #[test]
    fn fw_unit_step_collapses() {
        let mut set = ActiveSet::from_weighted(vec![e(3, 0), e(3, 1)], vec![0.4, 0.6]).unwrap();
        set.apply_fw(e(3, 2), 1.0).unwrap();
        assert_eq!(set.len(), 1);
        assert_eq!(set.weight_of(&e(3, 2)), Some(1.0));
        assert_eq!(set.iterate(), &[0.0, 0.0, 1.0]);
    }

    #[test]
    fn fw_rejects_bad_step() {
        let mut set = ActiveSet::singleton(e(2, 0));
        assert!(set.apply_fw(e(2, 1), 1.5).is_err());
    }

    #[test]
    fn away_step_to_limit_drops() {
        let mut set = ActiveSet::from_weighted(vec![e(2, 0), e(2, 1)], vec![0.25, 0.75]).unwrap();
        let limit = set.away_limit(0);
        assert!((limit - 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(set.apply_away(&e(2, 0), limit).unwrap(), StepKind::Drop);
        assert_eq!(set.len(), 1);
        set.check_invariants().unwrap();
    }

    #[derive(Debug, Clone)]
    enum Op {
        Fw(usize, f64),
        Pairwise(usize, usize, f64),
    }

    fn op() -> impl Strategy<Value = Op> {
        prop_oneof![
            (0..6usize, 0.0..=1.0f64).prop_map(|(i, l)| Op::Fw(i, l)),
            (0..6usize, 0..6usize, 0.0..=1.0f64).prop_map(|(a, b, f)| Op::Pairwise(a, b, f)),
        ]
    }

    proptest! {
        #[test]
        fn invariants_survive_any_update_sequence(ops in proptest::collection::vec(op(), 1..300)) {
            let n = 6;
            let mut set = ActiveSet::singleton(e(n, 0));
            for op in ops {
                let before = set.len();
                match op {
                    Op::Fw(i, l) => set.apply_fw(e(n, i), l).unwrap(),
                    Op::Pairwise(a, b, frac) => {
                        let away = set.atoms()[a % set.len()].clone();
                        let toward = set.atoms()[b % set.len()].clone();
                        let lmax = set.weight_of(&away).unwrap();
                        set.apply_pairwise(&away, &toward, frac * lmax).unwrap();
                        // local pairwise steps never grow the support
                        prop_assert!(set.len() <= before);
                    }
                }
                prop_assert!(set.check_invariants().is_ok(), "{:?}", set.check_invariants());
            }
        }
    }
}
