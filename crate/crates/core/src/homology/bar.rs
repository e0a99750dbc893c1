//! Bar complexes `E⊗A^{⊗n}⊗E` and `E⊗A^{⊗n}⊗(σ⁻¹E)` and the lifting ψ′ of ρ.

use crate::ncpoly::{Monomial, TowerElement};
use crate::ore::OreTower;
use crate::report::{Check, VerificationReport};
use crate::scalars::FieldValue;

use super::{base_tuples, top, HomologyError, Perturbation, Tensor};

/// Which bar complex: the plain one or the one twisted on the right.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BarVariant {
    Plain,
    Twisted,
}

fn arity(u: &Tensor) -> Option<usize> {
    u.terms().next().map(|(k, _)| k.len())
}

/// Bar differential on tensors of `n + 2` factors.
pub fn bar_diff(t: &OreTower, variant: BarVariant, n: usize, u: &Tensor) -> Result<Tensor, HomologyError> {
    let x = top(t)?;
    if let Some(a) = arity(u) {
        if a != n + 2 {
            return Err(HomologyError::ArityMismatch { expected: n + 2, got: a });
        }
    }
    let mut out = Tensor::zero();
    for (k, c) in u.terms() {
        for i in 0..=n {
            let sign = if i % 2 == 0 { c.clone() } else { c.neg_ref() };
            let left = if variant == BarVariant::Twisted && i == n && n > 0 {
                t.sigma_inv(x, &t.mono(k[i].clone()))?
            } else {
                t.mono(k[i].clone())
            };
            let prod = t.multiply(&left, &t.mono(k[i + 1].clone()));
            let mut factors: Vec<TowerElement> = Vec::with_capacity(n + 1);
            factors.extend(k[..i].iter().map(|m| t.mono(m.clone())));
            factors.push(prod);
            factors.extend(k[i + 2..].iter().map(|m| t.mono(m.clone())));
            out.add_scaled(&Tensor::of(t, &factors), &sign);
        }
    }
    Ok(out)
}

/// ψ′ on `1⊗a_1⊗…⊗a_n⊗1` for base monomials `a`.
fn psi_core(t: &OreTower, args: &[Monomial], perturb: Perturbation) -> Result<Tensor, HomologyError> {
    let x = top(t)?;
    let one = t.one();
    let xe = t.gen(x);
    let inv: Vec<TowerElement> =
        args.iter().map(|a| t.sigma_inv(x, &t.mono(a.clone()))).collect::<Result<_, _>>()?;
    let plain: Vec<TowerElement> = args.iter().map(|a| t.mono(a.clone())).collect();

    let mut first = vec![xe.clone()];
    first.extend(inv.iter().cloned());
    first.push(one.clone());
    let mut out = Tensor::of(t, &first);

    let mut second = vec![one.clone()];
    second.extend(plain.iter().cloned());
    second.push(xe);
    out = out.sub(&Tensor::of(t, &second));

    let sum_sign = if perturb.psi_delta_sign { t.int(1) } else { t.int(-1) };
    for j in 0..args.len() {
        let mut f = vec![one.clone()];
        f.extend(plain[..j].iter().cloned());
        f.push(t.apply_delta(x, &inv[j])?);
        f.extend(inv[j + 1..].iter().cloned());
        f.push(one.clone());
        out.add_scaled(&Tensor::of(t, &f), &sum_sign);
    }
    Ok(out)
}

/// ψ′: twisted bar tensors to plain ones, extended E-bilinearly.
pub fn psi_prime(t: &OreTower, n: usize, u: &Tensor, perturb: Perturbation) -> Result<Tensor, HomologyError> {
    if let Some(a) = arity(u) {
        if a != n + 2 {
            return Err(HomologyError::ArityMismatch { expected: n + 2, got: a });
        }
    }
    let mut out = Tensor::zero();
    for (k, c) in u.terms() {
        let core = psi_core(t, &k[1..=n], perturb)?;
        let (e, e2) = (t.mono(k[0].clone()), t.mono(k[n + 1].clone()));
        for (ck, cc) in core.terms() {
            let mut factors: Vec<TowerElement> = ck.iter().map(|m| t.mono(m.clone())).collect();
            factors[0] = t.multiply(&e, &factors[0]);
            let last = factors.len() - 1;
            factors[last] = t.multiply(&factors[last], &e2);
            out.add_scaled(&Tensor::of(t, &factors), &c.mul_ref(cc));
        }
    }
    Ok(out)
}

fn unit_bar(t: &OreTower, args: &[Monomial]) -> Tensor {
    let mut k = vec![Monomial::one()];
    k.extend(args.iter().cloned());
    k.push(Monomial::one());
    let mut u = Tensor::zero();
    u.add_term(k, FieldValue::one(t.field()));
    u
}

/// `b′₀∘ψ′ₙ = ψ′ₙ₋₁∘b′₁` on every base tuple with `n ≤ n_max` and total degree `≤ cap`,
/// plus `b′∘b′ = 0` for both variants on the same tuples.
pub fn verify_lifting(t: &OreTower, n_max: usize, cap: u32, perturb: Perturbation) -> Result<VerificationReport, HomologyError> {
    let x = top(t)?;
    let mut chain = Ok(());
    let mut square = Ok(());
    let mut count = 0usize;
    for n in 1..=n_max {
        for args in base_tuples(t, x, n, cap) {
            count += 1;
            let u = unit_bar(t, &args);
            let lhs = bar_diff(t, BarVariant::Plain, n, &psi_prime(t, n, &u, perturb)?)?;
            let rhs = psi_prime(t, n - 1, &bar_diff(t, BarVariant::Twisted, n, &u)?, perturb)?;
            if chain.is_ok() && lhs != rhs {
                let shown: Vec<String> = args.iter().map(|m| t.render(&t.mono(m.clone()))).collect();
                chain = Err(format!(
                    "at 1⊗{}⊗1: b′ψ′ = {} but ψ′b′ = {}",
                    shown.join("⊗"),
                    lhs.render(t),
                    rhs.render(t)
                ));
            }
            if n >= 2 && square.is_ok() {
                for v in [BarVariant::Plain, BarVariant::Twisted] {
                    let dd = bar_diff(t, v, n - 1, &bar_diff(t, v, n, &u)?)?;
                    if !dd.is_zero() {
                        square = Err(format!("{v:?} b′∘b′ ≠ 0: {}", dd.render(t)));
                    }
                }
            }
        }
    }
    let mut r = VerificationReport::new();
    r.push(
        Check::from_result("bar lifting: b′ψ′ = ψ′b′", chain)
            .with_range(0, cap)
            .with_note(format!("{count} basis tuples, arity ≤ {n_max}")),
    );
    r.push(Check::from_result("bar lifting: b′∘b′ = 0", square).with_range(0, cap));
    Ok(r)
}
