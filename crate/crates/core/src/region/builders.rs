// Copyright 2026 The qwiretap Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

//! One-shot region builders.

use super::{Budget, RateRegion, Term};
use crate::channel::{
    control_state_mawtc, control_state_ppqwtc, control_state_qbc, control_state_qbc_pair, CqMaWtc, InputLaw, PpLaw,
    PpQwtc, Qbc, QbcLaw, QbcPairLaw, Q, U, U1, U2, X, X1, X2, Y, Y1, Y2, Z,
};
use crate::error::{Error, Result};
use crate::quantities::{
    conditional_alt_smooth_max_mi, conditional_hypothesis_testing_mi, conditional_smooth_max_mi, SmoothingParams,
};

const O1_NOTE: &str = "o1 constant is unspecified by the bound; configured value used";

fn check_unit(eps: f64) -> Result<()> {
    if eps > 0.0 && eps < 1.0 {
        Ok(())
    } else {
        Err(Error::predicate("eps in (0, 1)", format!("eps = {eps}")))
    }
}

/// `log₂ ε − 2`, the testing penalty of the broadcast and multiple-access bounds.
fn testing_penalty(eps: f64) -> f64 {
    eps.log2() - 2.0
}

fn mac_region(
    name: &str,
    ch: &CqMaWtc,
    law: &InputLaw,
    p: &SmoothingParams,
    penalty: Term,
    budget: Budget,
) -> Result<RateRegion> {
    let s = control_state_mawtc(ch, law)?;
    let eta = p.eta();
    let ih1 = conditional_hypothesis_testing_mi(&s, &[X1], &[X2, Y], &[Q], p.eps)?;
    let ih2 = conditional_hypothesis_testing_mi(&s, &[X2], &[X1, Y], &[Q], p.eps)?;
    let ih12 = conditional_hypothesis_testing_mi(&s, &[X1, X2], &[Y], &[Q], p.eps)?;
    let lk1 = conditional_smooth_max_mi(&s, &[X1], &[Z], &[Q], eta)?;
    let lk2 = conditional_smooth_max_mi(&s, &[X2], &[Z, X1], &[Q], eta)?;
    let split = -(3.0 / p.eps_prime.powi(3)).log2();
    let quarter = 0.25 * p.delta_prime.log2();

    let mut r = RateRegion::new(name, &["R1", "R2"]);
    r.push(
        &[1, 0],
        vec![
            Term::new("I_H(X1;X2Y|Q)", ih1),
            Term::new("-I_max(X1;Z|Q)", -lk1),
            penalty.clone(),
            Term::new("-log2(3/eps'^3)", split),
            Term::new("log2(delta')/4", quarter),
        ],
    );
    r.push(
        &[0, 1],
        vec![
            Term::new("I_H(X2;X1Y|Q)", ih2),
            Term::new("-I_max(X2;ZX1|Q)", -lk2),
            penalty.clone(),
            Term::new("-log2(3/eps'^3)", split),
            Term::new("log2(delta')/4", quarter),
            Term::new("o1", p.o1),
        ],
    );
    r.push(
        &[1, 1],
        vec![
            Term::new("I_H(X1X2;Y|Q)", ih12),
            Term::new("-I_max(X1;Z|Q)", -lk1),
            Term::new("-I_max(X2;ZX1|Q)", -lk2),
            penalty,
            Term::new("-2log2(3/eps'^3)", 2.0 * split),
            Term::new("log2(delta')/2", 2.0 * quarter),
            Term::new("o1", p.o1),
        ],
    );
    r.budgets.push(budget);
    r.notes.push(O1_NOTE.into());
    Ok(r)
}

/// Region of the simultaneous decoder with smoothing-based leakage terms.
pub fn region_corollary1(ch: &CqMaWtc, law: &InputLaw, p: &SmoothingParams) -> Result<RateRegion> {
    p.check_corollary1()?;
    let budget = Budget::new(
        "error",
        "49√ε + 20δ′^{1/8}",
        49.0 * p.eps.sqrt() + 20.0 * p.delta_prime.powf(0.125),
    );
    mac_region(
        "corollary1",
        ch,
        law,
        p,
        Term::new("log2(eps)-2", testing_penalty(p.eps)),
        budget,
    )
}

/// As [`region_corollary1`] with the penalty `−log₂(4ε/δ²)`.
pub fn region_theorem1(ch: &CqMaWtc, law: &InputLaw, p: &SmoothingParams) -> Result<RateRegion> {
    p.check_theorem1()?;
    let budget = Budget::new(
        "error",
        "ε + 2δ + 20δ′^{1/8}",
        p.eps + 2.0 * p.delta + 20.0 * p.delta_prime.powf(0.125),
    );
    mac_region(
        "theorem1",
        ch,
        law,
        p,
        Term::new("-log2(4eps/delta^2)", -(4.0 * p.eps / (p.delta * p.delta)).log2()),
        budget,
    )
}

fn pp_region(name: &str, ch: &PpQwtc, law: &PpLaw, p: &SmoothingParams, leakage: bool) -> Result<RateRegion> {
    let s = control_state_ppqwtc(ch, law)?;
    let te = p.theorem2_testing_eps();
    let ih1 = conditional_hypothesis_testing_mi(&s, &[U1], &[Y], &[U2], te)?;
    let ih2 = conditional_hypothesis_testing_mi(&s, &[U2], &[Y], &[U1], te)?;
    let pen = Term::new("-log2(4eps1/delta1^2)", -(4.0 * p.eps1 / (p.delta1 * p.delta1)).log2());
    let split = Term::new("-2log2(1/delta2)", -2.0 * (1.0 / p.delta2).log2());
    let mut t1 = vec![Term::new("I_H(U1;Y|U2)", ih1)];
    let mut t2 = vec![Term::new("I_H(U2;Y|U1)", ih2)];
    if leakage {
        let le = p.theorem2_leakage_eps();
        t1.push(Term::new("-I~_max(U1;Z)", -conditional_alt_smooth_max_mi(&s, &[Z], &[U1], &[], le)?));
        t2.push(Term::new("-I~_max(U2;Z|U1)", -conditional_alt_smooth_max_mi(&s, &[Z], &[U2], &[U1], le)?));
    }
    t1.extend([pen.clone(), split.clone()]);
    t2.extend([pen, split]);
    let mut r = RateRegion::new(name, &["R1", "R2"]);
    r.push(&[1, 0], t1);
    r.push(&[0, 1], t2);
    let (e1, e2) = (p.eps1, p.eps2);
    r.budgets.push(Budget::new(
        "error",
        "3ε₁ + 2√ε₁ + 2√ε₂",
        3.0 * e1 + 2.0 * e1.sqrt() + 2.0 * e2.sqrt(),
    ));
    r.budgets.push(Budget::new(
        "secrecy",
        "2(ε₁ + √ε₁) + √ε₂",
        2.0 * (e1 + e1.sqrt()) + e2.sqrt(),
    ));
    Ok(r)
}

/// Successive position-based decoding over the single-sender channel. No
/// sum-rate constraint.
pub fn region_theorem2(ch: &PpQwtc, law: &PpLaw, p: &SmoothingParams) -> Result<RateRegion> {
    p.check_theorem2()?;
    pp_region("theorem2", ch, law, p, true)
}

/// [`region_theorem2`] without leakage terms and with `δ₂ = ε₂`.
pub fn region_19(ch: &PpQwtc, law: &PpLaw, p: &SmoothingParams) -> Result<RateRegion> {
    let q = SmoothingParams { delta2: p.eps2, ..*p };
    q.check_theorem2()?;
    pp_region("region19", ch, law, &q, false)
}

/// Superposition coding: personal rate `R1`, common rate `Rc`.
pub fn region_theorem3(ch: &Qbc, law: &QbcLaw, eps: f64) -> Result<RateRegion> {
    check_unit(eps)?;
    let s = control_state_qbc(ch, law)?;
    let pen = Term::new("log2(eps)-2", testing_penalty(eps));
    let mut r = RateRegion::new("theorem3", &["R1", "Rc"]);
    r.push(
        &[1, 0],
        vec![Term::new("I_H(X;Y1|U)", conditional_hypothesis_testing_mi(&s, &[X], &[Y1], &[U], eps)?), pen.clone()],
    );
    r.push(
        &[0, 1],
        vec![Term::new("I_H(U;Y2)", conditional_hypothesis_testing_mi(&s, &[U], &[Y2], &[], eps)?), pen.clone()],
    );
    r.push(
        &[1, 1],
        vec![Term::new("I_H(X;Y1)", conditional_hypothesis_testing_mi(&s, &[X], &[Y1], &[], eps)?), pen],
    );
    Ok(r)
}

/// Two personal messages and one common message.
pub fn region_corollary2(ch: &Qbc, law: &QbcPairLaw, eps: f64) -> Result<RateRegion> {
    check_unit(eps)?;
    let s = control_state_qbc_pair(ch, law)?;
    let pen = Term::new("log2(eps)-2", testing_penalty(eps));
    let ih = |label: &str, a: &[&str], b: &[&str], z: &[&str]| -> Result<Vec<Term>> {
        Ok(vec![Term::new(label, conditional_hypothesis_testing_mi(&s, a, b, z, eps)?), pen.clone()])
    };
    let mut r = RateRegion::new("corollary2", &["R1", "R2", "Rc"]);
    r.push(&[1, 0, 0], ih("I_H(X1;Y1|U)", &[X1], &[Y1], &[U])?);
    r.push(&[0, 1, 0], ih("I_H(X2;Y1|UX1)", &[X2], &[Y1], &[U, X1])?);
    r.push(&[0, 0, 1], ih("I_H(U;Y2)", &[U], &[Y2], &[])?);
    r.push(&[1, 1, 0], ih("I_H(X1X2;Y1|U)", &[X1, X2], &[Y1], &[U])?);
    r.push(&[1, 0, 1], ih("I_H(X1;Y1)", &[X1], &[Y1], &[])?);
    r.push(&[0, 1, 1], ih("I_H(X2;Y1|X1)", &[X2], &[Y1], &[X1])?);
    Ok(r)
}

/// Two personal messages to the first receiver, no common message.
pub fn region_18(ch: &Qbc, law: &QbcPairLaw, eps: f64) -> Result<RateRegion> {
    check_unit(eps)?;
    let s = control_state_qbc_pair(ch, law)?;
    let pen = Term::new("log2(eps)-2", testing_penalty(eps));
    let ih = |label: &str, a: &[&str], b: &[&str], z: &[&str]| -> Result<Vec<Term>> {
        Ok(vec![Term::new(label, conditional_hypothesis_testing_mi(&s, a, b, z, eps)?), pen.clone()])
    };
    let mut r = RateRegion::new("region18", &["R1", "R2"]);
    r.push(&[1, 0], ih("I_H(X1;Y1)", &[X1], &[Y1], &[])?);
    r.push(&[0, 1], ih("I_H(X2;Y1|X1)", &[X2], &[Y1], &[X1])?);
    r.push(&[1, 1], ih("I_H(X1X2;Y1)", &[X1, X2], &[Y1], &[])?);
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::mawtc_to_ppqwtc;
    use crate::quantities::{alt_smooth_max_mi, hypothesis_testing_mi, smooth_max_mi};
    use crate::random;
    use crate::state::{DensityOperator, Distribution};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn orthogonal_mac() -> CqMaWtc {
        let z = DensityOperator::maximally_mixed(2);
        let table = (0..4).map(|i| DensityOperator::basis(4, i).tensor(&z)).collect();
        CqMaWtc::new(2, 2, 4, 2, table).unwrap()
    }

    #[test]
    fn remark1_equality_at_delta_eq_eps() {
        let mut rng = ChaCha8Rng::seed_from_u64(40);
        let ch = random::mawtc(2, 2, 2, 2, &mut rng);
        let law = random::input_law(2, 2, &mut rng);
        let p = SmoothingParams { delta: 0.1, ..Default::default() };
        let a = region_corollary1(&ch, &law, &p).unwrap().bounds();
        let b = region_theorem1(&ch, &law, &p).unwrap().bounds();
        for (x, y) in a.iter().zip(&b) {
            assert!((x - y).abs() < 1e-10);
        }
        let half = SmoothingParams { delta: 0.05, ..p };
        let c = region_theorem1(&ch, &law, &half).unwrap().bounds();
        assert!(a.iter().zip(&c).all(|(x, y)| (x - y).abs() > 1.0));
    }

    #[test]
    fn orthogonal_mac_reassembly() {
        let ch = orthogonal_mac();
        let law = InputLaw::uniform(2, 2);
        let p = SmoothingParams { eps: 0.1, eps_prime: 0.05, delta_prime: 0.2, ..Default::default() };
        let r = region_corollary1(&ch, &law, &p).unwrap();
        let s = control_state_mawtc(&ch, &law).unwrap().partial_trace(&[Q]).unwrap();
        let ih1 = hypothesis_testing_mi(&s, &[X1], &[X2, Y], 0.1).unwrap();
        let ih12 = hypothesis_testing_mi(&s, &[X1, X2], &[Y], 0.1).unwrap();
        let lk1 = smooth_max_mi(&s, &[X1], &[Z], 0.15).unwrap();
        assert!(lk1.abs() < 1e-9);
        let pen = 0.1f64.log2() - 2.0 - (3.0 / 0.05f64.powi(3)).log2();
        assert!((r.bounds()[0] - (ih1 - lk1 + pen + 0.25 * 0.2f64.log2())).abs() < 1e-10);
        let pen2 = 0.1f64.log2() - 2.0 - 2.0 * (3.0 / 0.05f64.powi(3)).log2() + 0.5 * 0.2f64.log2();
        assert!((r.bounds()[2] - (ih12 + pen2)).abs() < 1e-10);
        assert_eq!(r.budgets[0].label, "49√ε + 20δ′^{1/8}");
    }

    #[test]
    fn eve_silent_mac_has_no_leakage() {
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        let ch = random::eve_silent_mawtc(2, 2, 2, 2, &mut rng);
        let law = random::input_law(2, 2, &mut rng);
        let r = region_theorem1(&ch, &law, &SmoothingParams::default()).unwrap();
        for c in &r.constraints {
            for t in c.terms.iter().filter(|t| t.label.contains("I_max")) {
                assert!(t.value.abs() <= 1e-9, "{}: {}", t.label, t.value);
            }
        }
    }

    #[test]
    fn theorem2_reassembly_and_structure() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let ch = random::ppqwtc(2, 2, 2, 2, &mut rng);
        let law = PpLaw::uniform(2, 2);
        let p = SmoothingParams::default();
        let r = region_theorem2(&ch, &law, &p).unwrap();
        assert_eq!(r.constraints.len(), 2);
        assert!(r.constraints.iter().all(|c| !c.is_sum_rate()));
        let s = control_state_ppqwtc(&ch, &law).unwrap();
        let ih1 = conditional_hypothesis_testing_mi(&s, &[U1], &[Y], &[U2], 0.05).unwrap();
        let lk1 = alt_smooth_max_mi(&s, &[Z], &[U1], 0.1f64.sqrt() - 0.05).unwrap();
        let pen = -(4.0 * 0.1 / 0.0025f64).log2() - 2.0 * 20f64.log2();
        assert!((r.bounds()[0] - (ih1 - lk1 + pen)).abs() < 1e-10);
    }

    #[test]
    fn region19_matches_eve_silent_theorem2() {
        let mut rng = ChaCha8Rng::seed_from_u64(43);
        let ch = random::eve_silent_ppqwtc(2, 2, 2, 2, &mut rng);
        let law = PpLaw::uniform(2, 2);
        let p = SmoothingParams { delta2: 0.1, ..Default::default() };
        let a = region_theorem2(&ch, &law, &p).unwrap().bounds();
        let b = region_19(&ch, &law, &SmoothingParams::default()).unwrap().bounds();
        for (x, y) in a.iter().zip(&b) {
            assert!((x - y).abs() < 1e-9);
        }
    }

    #[test]
    fn theorem3_constant_auxiliary() {
        let mut rng = ChaCha8Rng::seed_from_u64(44);
        let ch = random::qbc(2, 2, 2, &mut rng);
        let r = region_theorem3(&ch, &QbcLaw::without_auxiliary(Distribution::uniform(2)), 0.2).unwrap();
        let want = -(0.8f64).log2() - 2.0 + 0.2f64.log2();
        assert!((r.bound(&[0, 1]).unwrap() - want).abs() < 1e-9);
    }

    #[test]
    fn structural_counts_and_predicates() {
        let mut rng = ChaCha8Rng::seed_from_u64(45);
        let q = random::qbc(4, 2, 2, &mut rng);
        let law = QbcPairLaw::independent(Distribution::uniform(2), Distribution::uniform(2));
        let r18 = region_18(&q, &law, 0.1).unwrap();
        assert_eq!(r18.constraints.len(), 3);
        assert!(r18.constraints[2].is_sum_rate());
        assert_eq!(region_corollary2(&q, &law, 0.1).unwrap().constraints.len(), 6);
        let pp = mawtc_to_ppqwtc(&random::mawtc(2, 2, 2, 2, &mut rng));
        let bad = SmoothingParams { delta1: 0.2, ..Default::default() };
        match region_19(&pp, &PpLaw::uniform(2, 2), &bad) {
            Err(Error::PredicateViolated { predicate, .. }) => assert_eq!(predicate, "delta1 in (0, eps1)"),
            other => panic!("{other:?}"),
        }
        assert!(matches!(region_theorem3(&q, &QbcLaw::without_auxiliary(Distribution::uniform(4)), 1.0),
            Err(Error::PredicateViolated { .. })));
    }
}
