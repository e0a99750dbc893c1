//! The sequence `0 → E⊗_A(σ⁻¹E) → E⊗_A E → E → 0` with maps ρ and μ.
//!
//! `E` is free as a left `A`-module on the powers of the top variable `x`, so
//! `E⊗_A E` has basis `m⊗x^j` with `m` a normal-form monomial of `E`.

use std::collections::{BTreeMap, HashMap};

use crate::linalg::{rank, SparseVec};
use crate::ncpoly::{Monomial, TowerElement};
use crate::ore::OreTower;
use crate::report::{Check, VerificationReport};
use crate::scalars::FieldValue;

use super::{top, HomologyError, Perturbation};

/// `Σ c·(m ⊗ x^j)` in `E⊗_A E` (untwisted) or `E⊗_A (σ⁻¹E)` (twisted).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BalancedTensor {
    pub rep: BTreeMap<(Monomial, u16), FieldValue>,
    pub twisted: bool,
}

impl BalancedTensor {
    pub fn zero(twisted: bool) -> Self {
        BalancedTensor { rep: BTreeMap::new(), twisted }
    }

    fn add(&mut self, m: Monomial, j: u16, c: FieldValue) {
        if c.is_zero() {
            return;
        }
        let key = (m, j);
        let v = match self.rep.remove(&key) {
            Some(old) => old.add_ref(&c),
            None => c,
        };
        if !v.is_zero() {
            self.rep.insert(key, v);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.rep.is_empty()
    }
}

/// Canonical form of `e ⊗ e'`: base coefficients of `e'` slide left, through σ
/// when twisted.
pub fn balanced(t: &OreTower, e: &TowerElement, e2: &TowerElement, twisted: bool) -> Result<BalancedTensor, HomologyError> {
    let x = top(t)?;
    let mut out = BalancedTensor::zero(twisted);
    for (j, coeff) in t.left_coefficients(x, e2).into_iter().enumerate() {
        if coeff.is_zero() {
            continue;
        }
        let slid = if twisted { t.sigma(x, &coeff)? } else { coeff };
        for (m, c) in t.multiply(e, &slid).terms() {
            out.add(m.clone(), j as u16, c.clone());
        }
    }
    Ok(out)
}

fn times_x(m: &Monomial, x: usize, k: u16) -> Monomial {
    m.with_exp(x, m.exp(x) + k)
}

/// `ρ(e⊗e') = ex⊗e' − e⊗xe'`.
pub fn rho(t: &OreTower, u: &BalancedTensor, perturb: Perturbation) -> Result<BalancedTensor, HomologyError> {
    let x = top(t)?;
    let mut out = BalancedTensor::zero(false);
    let second = if perturb.rho_sign { t.int(1) } else { t.int(-1) };
    for ((m, j), c) in &u.rep {
        out.add(times_x(m, x, 1), *j, c.clone());
        out.add(m.clone(), j + 1, c.mul_ref(&second));
    }
    Ok(out)
}

/// Multiplication `E⊗_A E → E`.
pub fn mu(t: &OreTower, u: &BalancedTensor) -> Result<TowerElement, HomologyError> {
    let x = top(t)?;
    let mut out = TowerElement::zero();
    for ((m, j), c) in &u.rep {
        out.add_term(times_x(m, x, *j), c.clone());
    }
    Ok(out)
}

/// Basis `m⊗x^j` of one graded piece; the twisted copy sits `deg x` higher.
fn piece(t: &OreTower, d: u32, twisted: bool) -> Vec<(Monomial, u16)> {
    let x = t.num_gens() - 1;
    let l = t.weights()[x];
    let shift = if twisted { l } else { 0 };
    let mut out = Vec::new();
    let mut j = 0u32;
    while shift + j * l <= d {
        for m in t.degree_basis(t.num_gens(), d - shift - j * l).iter() {
            out.push((m.clone(), j as u16));
        }
        j += 1;
    }
    out
}

/// Per-degree exactness of the sequence up to `cap`.
pub fn verify_ses(t: &OreTower, cap: u32, perturb: Perturbation) -> Result<VerificationReport, HomologyError> {
    top(t)?;
    let mut composite = Ok(());
    let mut injective = Ok(());
    let mut middle = Ok(());
    let mut surjective = Ok(());
    for d in 0..=cap {
        let src = piece(t, d, true);
        let mid = piece(t, d, false);
        let mid_index: HashMap<&(Monomial, u16), usize> = mid.iter().enumerate().map(|(i, k)| (k, i)).collect();
        let target = t.degree_basis(t.num_gens(), d);
        let target_index: HashMap<&Monomial, usize> = target.iter().enumerate().map(|(i, k)| (k, i)).collect();

        let mut rho_rows = Vec::new();
        let mut composite_here = true;
        for (m, j) in &src {
            let mut u = BalancedTensor::zero(true);
            u.add(m.clone(), *j, t.int(1));
            let image = rho(t, &u, perturb)?;
            let back = mu(t, &image)?;
            if !back.is_zero() {
                composite_here = false;
                if composite.is_ok() {
                    composite = Err(format!("degree {d}: μ∘ρ({}⊗x^{j}) = {}", t.render(&t.mono(m.clone())), t.render(&back)));
                }
            }
            rho_rows.push(SparseVec::from_unsorted(
                image.rep.iter().map(|(k, c)| (mid_index[k], c.clone())).collect(),
            ));
        }
        let mu_rows: Vec<SparseVec<FieldValue>> = mid
            .iter()
            .map(|(m, j)| {
                let mut u = BalancedTensor::zero(false);
                u.add(m.clone(), *j, t.int(1));
                let img = mu(t, &u).expect("top exists");
                SparseVec::from_unsorted(img.terms().map(|(k, c)| (target_index[k], c.clone())).collect())
            })
            .collect();
        let rank_rho = rank(rho_rows);
        let rank_mu = rank(mu_rows);
        if injective.is_ok() && rank_rho != src.len() {
            injective = Err(format!("degree {d}: rank ρ = {rank_rho} < {}", src.len()));
        }
        if middle.is_ok() && !composite_here {
            middle = Err(format!("degree {d}: im ρ is not contained in ker μ"));
        } else if middle.is_ok() && mid.len() - rank_mu != rank_rho {
            middle = Err(format!("degree {d}: dim ker μ = {} but dim im ρ = {rank_rho}", mid.len() - rank_mu));
        }
        if surjective.is_ok() && rank_mu != target.len() {
            surjective = Err(format!("degree {d}: rank μ = {rank_mu} < dim E = {}", target.len()));
        }
    }
    let mut r = VerificationReport::new();
    for (name, res) in [
        ("sequence: μ∘ρ = 0", composite),
        ("sequence: ρ injective", injective),
        ("sequence: ker μ = im ρ", middle),
        ("sequence: μ surjective", surjective),
    ] {
        r.push(Check::from_result(name, res).with_range(0, cap));
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::parse_tower;

    fn jordan() -> std::sync::Arc<OreTower> {
        parse_tower("field Q\ngen x deg 1\ngen y deg 1 { sigma: x -> x ; sigma_inv: x -> x ; delta: x -> x^2 }\n")
            .unwrap()
            .tower
    }

    #[test]
    fn rho_of_unit_and_balancing() {
        let t = jordan();
        let one = t.one();
        let r = rho(&t, &balanced(&t, &one, &one, true).unwrap(), Perturbation::default()).unwrap();
        let expect = {
            let mut b = balanced(&t, &t.gen(1), &one, false).unwrap();
            for (k, c) in balanced(&t, &one, &t.gen(1), false).unwrap().rep {
                b.add(k.0, k.1, c.neg_ref());
            }
            b
        };
        assert_eq!(r, expect);
        // 1⊗σ⁻¹(x) and x⊗1 are the same twisted tensor
        let x = t.gen(0);
        let s = t.sigma_inv(1, &x).unwrap();
        assert_eq!(balanced(&t, &one, &s, true).unwrap(), balanced(&t, &x, &one, true).unwrap());
    }

    #[test]
    fn jordan_sequence_exact_and_sign_flip_detected() {
        let t = jordan();
        assert!(verify_ses(&t, 6, Perturbation::default()).unwrap().all_passed());
        let bad = verify_ses(&t, 6, Perturbation { rho_sign: true, ..Default::default() }).unwrap();
        assert!(!bad.find("sequence: μ∘ρ = 0").unwrap().passed());
        assert!(!bad.find("sequence: ker μ = im ρ").unwrap().passed());
    }
}
