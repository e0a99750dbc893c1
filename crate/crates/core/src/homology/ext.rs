//! `Ext^*_{E^e}(E, E⊗E)` from a free resolution, and the twist read off its top group.

use std::collections::HashMap;

use crate::linalg::{solve, Echelon, SparseVec};
use crate::ncpoly::{Monomial, TowerElement};
use crate::ore::GenMap;
use crate::report::{Check, VerificationReport};
use crate::scalars::FieldValue;

use super::resolution::{pair_basis, Coordinates, FreeBimoduleComplex};
use super::{HomologyError, Pair};

#[derive(Clone, Debug)]
pub struct ExtResult {
    /// Image of every tower generator under the twist of the top group.
    pub twist: GenMap,
    /// Cohomological degree of the top group.
    pub dimension: usize,
    pub verified_degrees: (u32, u32),
    pub report: VerificationReport,
}

/// The dual complex `Hom(P_k, E⊗E)` in one internal degree.
struct DualSpot {
    /// Basis `(generator, m, n)`: the map sending that generator to `m⊗n`.
    basis: Vec<(usize, Monomial, Monomial)>,
}

struct Dual<'a> {
    c: &'a FreeBimoduleComplex,
    total: u32,
    /// `transpose[k][g]`: generators `h` of spot `k+1` with `d(e_h)` hitting `g`, and the coefficient.
    transpose: Vec<Vec<Vec<(usize, Pair)>>>,
}

impl<'a> Dual<'a> {
    fn new(c: &'a FreeBimoduleComplex) -> Self {
        let t = c.tower();
        let total = (0..c.num_gens()).map(|i| t.weights()[i]).sum();
        let mut transpose = Vec::new();
        for k in 0..c.length() {
            let mut tr = vec![Vec::new(); c.generators(k).len()];
            for h in 0..c.generators(k + 1).len() {
                for (g, p) in c.differential(k + 1, h) {
                    tr[*g].push((h, p.clone()));
                }
            }
            transpose.push(tr);
        }
        Dual { c, total, transpose }
    }

    /// Maps of internal degree `t`, shifted so that the top group starts in degree 0.
    fn spot(&self, k: usize, t: u32) -> DualSpot {
        let mut basis = Vec::new();
        for (g, gen) in self.c.generators(k).iter().enumerate() {
            let d = t as i64 - self.total as i64 + gen.degree as i64;
            if d < 0 {
                continue;
            }
            for (m, n) in pair_basis(self.c.tower(), self.c.num_gens(), d as u32) {
                basis.push((g, m, n));
            }
        }
        DualSpot { basis }
    }

    /// `(d^k φ)(e_h) = φ(d e_h)` for the basis map `φ: e_g ↦ m⊗n`.
    fn image(&self, k: usize, g: usize, m: &Monomial, n: &Monomial) -> Vec<Pair> {
        let t = self.c.tower();
        let one = FieldValue::one(t.field());
        let phi = Pair::basis(m.clone(), n.clone(), one);
        let mut out = vec![Pair::zero(); self.c.generators(k + 1).len()];
        for (h, coeff) in &self.transpose[k][g] {
            out[*h].add_assign(&coeff.outer(t, &phi));
        }
        out
    }

    /// Rank of `d^k` in internal degree `t`, its image rows in shared coordinates, and the
    /// dimension of its source.
    fn differential(&self, k: usize, t: u32, coords: &mut Coordinates) -> (Vec<SparseVec<FieldValue>>, usize) {
        let spot = self.spot(k, t);
        let rows = spot.basis.iter().map(|(g, m, n)| coords.vector(&self.image(k, *g, m, n))).collect();
        (rows, spot.basis.len())
    }
}

fn echelon_of(rows: &[SparseVec<FieldValue>]) -> Echelon<FieldValue> {
    let mut e = Echelon::new();
    for r in rows {
        e.insert(r);
    }
    e
}

/// The class `1⊗w` in the top spot.
fn top_vector(coords: &mut Coordinates, w: &Monomial, scale: &FieldValue) -> SparseVec<FieldValue> {
    coords.vector(&[Pair::basis(Monomial::one(), w.clone(), scale.clone())])
}

/// Solve `g⊗1 ≡ 1⊗w (mod image)` in degree `deg g`, both sides scaled by `scale`.
fn read_twist(
    dual: &Dual,
    gen: usize,
    scale: &FieldValue,
) -> Result<TowerElement, HomologyError> {
    let c = dual.c;
    let t = c.tower();
    let n = c.length();
    let deg = t.weights()[gen];
    let mut coords = Coordinates::default();
    let (rows, _) = if n == 0 { (Vec::new(), 0) } else { dual.differential(n - 1, deg, &mut coords) };
    let targets = t.degree_basis(c.num_gens(), deg);
    let cols: Vec<SparseVec<FieldValue>> = targets.iter().map(|w| top_vector(&mut coords, w, scale)).collect();
    let rhs = coords.vector(&[Pair::basis(Monomial::var(gen, 1), Monomial::one(), scale.clone())]);
    // unknowns: coefficients of 1⊗w first, then of the image rows
    let unknowns = cols.len() + rows.len();
    let mut eqs: HashMap<usize, Vec<(usize, FieldValue)>> = HashMap::new();
    for (j, v) in cols.iter().chain(rows.iter()).enumerate() {
        for (i, c) in &v.entries {
            eqs.entry(*i).or_default().push((j, c.clone()));
        }
    }
    let zero = FieldValue::zero(t.field());
    let mut keys: Vec<usize> = eqs.keys().copied().chain(rhs.entries.iter().map(|e| e.0)).collect();
    keys.sort_unstable();
    keys.dedup();
    let equations = keys
        .into_iter()
        .map(|i| {
            let row = SparseVec::from_unsorted(eqs.remove(&i).unwrap_or_default());
            (row, rhs.get(i).cloned().unwrap_or_else(|| zero.clone()))
        })
        .collect();
    let sol = solve(equations, unknowns, &zero).ok_or_else(|| {
        HomologyError::NotRankOne(format!("the class times {} is not a multiple of the class", t.names()[gen]))
    })?;
    let mut w = TowerElement::zero();
    for (m, c) in targets.iter().zip(&sol) {
        w.add_term(m.clone(), c.clone());
    }
    Ok(w)
}

/// Twist of the top Ext group, with vanishing below it and freeness of rank one at the top
/// certified in internal degrees `[0, cap]`.
pub fn ext_top(c: &FreeBimoduleComplex, cap: u32) -> Result<ExtResult, HomologyError> {
    ext_top_scaled(c, cap, None)
}

/// As [`ext_top`], with the generator class rescaled by `scale`.
pub fn ext_top_scaled(c: &FreeBimoduleComplex, cap: u32, scale: Option<FieldValue>) -> Result<ExtResult, HomologyError> {
    let t = c.tower();
    if !t.graded() {
        return Err(HomologyError::Ungraded);
    }
    let max_deg = (0..c.num_gens()).map(|i| t.weights()[i]).max().unwrap_or(0);
    if cap < max_deg {
        return Err(HomologyError::CapTooSmall { cap, needed: max_deg });
    }
    let n = c.length();
    let dual = Dual::new(c);
    let scale = scale.unwrap_or_else(|| FieldValue::one(t.field()));
    let mut report = VerificationReport::new();
    let mut vanishing = Ok(());
    let mut rank_one = Ok(());
    for deg in 0..=cap {
        // rank of d^k in this degree for k < n, with dim C^k
        let mut ranks = Vec::with_capacity(n);
        let mut dims = Vec::with_capacity(n + 1);
        let mut top_image = None;
        for k in 0..n {
            let mut coords = Coordinates::default();
            let (rows, dim) = dual.differential(k, deg, &mut coords);
            let e = echelon_of(&rows);
            ranks.push(e.rank());
            dims.push(dim);
            if k + 1 == n {
                top_image = Some((e, coords));
            }
        }
        for k in 0..n {
            let below = if k == 0 { 0 } else { ranks[k - 1] };
            let h = dims[k] - ranks[k] - below;
            if h != 0 && vanishing.is_ok() {
                vanishing = Err(format!("degree {deg}: spot {k} has cohomology of dimension {h}"));
            }
        }
        let top_dim = dual.spot(n, deg).basis.len();
        let image_rank = if n == 0 { 0 } else { ranks[n - 1] };
        let dim_e = t.degree_basis(c.num_gens(), deg).len();
        if rank_one.is_ok() {
            if top_dim - image_rank != dim_e {
                rank_one = Err(format!(
                    "degree {deg}: top cohomology has dimension {} but dim E = {dim_e}",
                    top_dim - image_rank
                ));
            } else {
                let (mut e, mut coords) = top_image.unwrap_or_else(|| (Echelon::new(), Coordinates::default()));
                for w in t.degree_basis(c.num_gens(), deg).iter() {
                    if !e.insert(&top_vector(&mut coords, w, &scale)) {
                        rank_one = Err(format!(
                            "degree {deg}: 1⊗{} lies in the span of the other classes",
                            t.render(&t.mono(w.clone()))
                        ));
                        break;
                    }
                }
            }
        }
    }
    report.push(
        Check::from_result("ext: lower cohomology vanishes", vanishing.clone())
            .with_range(0, cap)
            .with_note("certified per internal degree; higher degrees rest on the smoothness theorem"),
    );
    report.push(Check::from_result("ext: top cohomology free of rank one", rank_one.clone()).with_range(0, cap));
    if let Err(w) = vanishing {
        return Err(HomologyError::VanishingFails(w));
    }
    if let Err(w) = rank_one {
        return Err(HomologyError::NotRankOne(w));
    }
    let mut images = Vec::with_capacity(c.num_gens());
    for g in 0..c.num_gens() {
        images.push(read_twist(&dual, g, &scale)?);
    }
    Ok(ExtResult { twist: GenMap::new(images), dimension: n, verified_degrees: (0, cap), report })
}
