//! Coordinate-basis exterior algebra on R^4 with the Minkowski metric.
//!
//! Coordinates are ordered `(x, y, z, ξ)` with `ξ = ct`. A basis monomial
//! `dx^{i1}∧…∧dx^{ik}` with `i1 < … < ik` is encoded as a 4-bit mask, and a
//! [`KForm`] stores its `C(4, k)` components densely in lexicographic order of
//! those multi-indices.
//!
//! The Hodge star is not hard-coded. [`derive_star_table`] solves the defining
//! relation `α∧⋆β = (−1)^{ind η} η(α, β) ω_o` by brute force over basis
//! monomials, and [`hodge`] reads the resulting table.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::OnceLock;

use crate::error::{Error, Result};

/// Spatial dimension plus one.
pub const DIM: usize = 4;

/// Basis multi-indices per grade, in lexicographic order, as bit masks.
const BASIS: [&[u8]; 5] = [
    &[0b0000],
    &[0b0001, 0b0010, 0b0100, 0b1000],
    &[0b0011, 0b0101, 0b1001, 0b0110, 0b1010, 0b1100],
    &[0b0111, 0b1011, 0b1101, 0b1110],
    &[0b1111],
];

const COORD_NAMES: [&str; 4] = ["dx", "dy", "dz", "dξ"];

/// Number of components of a form of the given grade.
pub fn basis_len(grade: usize) -> usize {
    BASIS[grade].len()
}

/// Basis masks of a grade in storage order.
pub fn basis_masks(grade: usize) -> &'static [u8] {
    BASIS[grade]
}

fn position(mask: u8) -> usize {
    let grade = mask.count_ones() as usize;
    BASIS[grade]
        .iter()
        .position(|&m| m == mask)
        .expect("every 4-bit mask is a basis element")
}

/// Sign of `e_a ∧ e_b` relative to `e_{a|b}`; zero when the masks overlap.
fn wedge_sign(a: u8, b: u8) -> f64 {
    if a & b != 0 {
        return 0.0;
    }
    // one transposition per pair (i in a, j in b) with i > j
    let mut swaps = 0;
    for i in 0..DIM {
        if a & (1 << i) == 0 {
            continue;
        }
        swaps += (b & ((1u8 << i) - 1)).count_ones();
    }
    if swaps % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Indices (0-based) contained in a mask, ascending.
pub fn mask_indices(mask: u8) -> Vec<usize> {
    (0..DIM).filter(|i| mask & (1 << i) != 0).collect()
}

fn mask_from_indices(idx: &[usize]) -> Option<(u8, f64)> {
    // returns the sorted mask and the parity of the sorting permutation
    let mut mask = 0u8;
    for &i in idx {
        if i >= DIM || mask & (1 << i) != 0 {
            return None;
        }
        mask |= 1 << i;
    }
    let mut inversions = 0;
    for a in 0..idx.len() {
        for b in a + 1..idx.len() {
            if idx[a] > idx[b] {
                inversions += 1;
            }
        }
    }
    Some((mask, if inversions % 2 == 0 { 1.0 } else { -1.0 }))
}

/// Diagonal metric signature. Only the Minkowski signature `(−,−,−,+)` is
/// constructible.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MetricSignature {
    diag: [i8; DIM],
}

impl MetricSignature {
    pub const MINKOWSKI: MetricSignature = MetricSignature { diag: [-1, -1, -1, 1] };

    pub fn diag(&self) -> [f64; DIM] {
        self.diag.map(f64::from)
    }

    pub fn entry(&self, i: usize) -> f64 {
        f64::from(self.diag[i])
    }

    /// Number of negative entries.
    pub fn index(&self) -> usize {
        self.diag.iter().filter(|&&s| s < 0).count()
    }

    /// `(−1)^{ind η}`.
    ///
    /// Counting minus signs (3) or plus signs (1) gives the same parity in
    /// dimension four; both readings are evaluated and must agree.
    pub fn index_factor(&self) -> f64 {
        let minus = self.index();
        let plus = DIM - minus;
        let parity = |n: usize| if n.is_multiple_of(2) { 1.0 } else { -1.0 };
        debug_assert_eq!(parity(minus), parity(plus));
        parity(minus)
    }

    /// Product of the diagonal entries over a multi-index.
    pub fn mask_factor(&self, mask: u8) -> f64 {
        mask_indices(mask).iter().map(|&i| self.entry(i)).product()
    }
}

/// A homogeneous differential form with constant coefficients.
#[derive(Clone, Copy, PartialEq)]
pub struct KForm {
    grade: usize,
    comps: [f64; 6],
}

impl KForm {
    pub fn zero(grade: usize) -> Self {
        assert!(grade <= DIM, "grade {grade} exceeds dimension");
        KForm { grade, comps: [0.0; 6] }
    }

    pub fn scalar(value: f64) -> Self {
        let mut f = KForm::zero(0);
        f.comps[0] = value;
        f
    }

    /// The unit volume form `ω_o = dx∧dy∧dz∧dξ`.
    pub fn volume() -> Self {
        KForm::from_components(4, &[1.0]).expect("grade-4 form has one component")
    }

    pub fn from_components(grade: usize, comps: &[f64]) -> Result<Self> {
        if grade > DIM {
            return Err(Error::Degree(format!("grade {grade} exceeds {DIM}")));
        }
        if comps.len() != basis_len(grade) {
            return Err(Error::Degree(format!(
                "grade {grade} needs {} components, got {}",
                basis_len(grade),
                comps.len()
            )));
        }
        let mut f = KForm::zero(grade);
        f.comps[..comps.len()].copy_from_slice(comps);
        Ok(f)
    }

    /// Unit basis monomial for a mask.
    pub fn basis(mask: u8) -> Self {
        let grade = mask.count_ones() as usize;
        let mut f = KForm::zero(grade);
        f.comps[position(mask)] = 1.0;
        f
    }

    /// `dx^i` for a 0-based coordinate index.
    pub fn dx(i: usize) -> Self {
        KForm::basis(1 << i)
    }

    /// Monomial `dx^{i1}∧…∧dx^{ik}` for unsorted indices, sign included.
    pub fn monomial(indices: &[usize]) -> Self {
        match mask_from_indices(indices) {
            Some((mask, sign)) => KForm::basis(mask) * sign,
            None => KForm::zero(indices.len().min(DIM)),
        }
    }

    /// Grade-1 form from covariant components.
    pub fn covector(c: [f64; DIM]) -> Self {
        KForm::from_components(1, &c).expect("four components")
    }

    pub fn grade(&self) -> usize {
        self.grade
    }

    pub fn components(&self) -> &[f64] {
        &self.comps[..basis_len(self.grade)]
    }

    pub fn components_mut(&mut self) -> &mut [f64] {
        let n = basis_len(self.grade);
        &mut self.comps[..n]
    }

    /// Component on a basis mask (must match the grade).
    pub fn get(&self, mask: u8) -> f64 {
        debug_assert_eq!(mask.count_ones() as usize, self.grade);
        self.comps[position(mask)]
    }

    /// Fully antisymmetric tensor component for arbitrary index order.
    pub fn tensor(&self, indices: &[usize]) -> f64 {
        debug_assert_eq!(indices.len(), self.grade);
        match mask_from_indices(indices) {
            Some((mask, sign)) => sign * self.get(mask),
            None => 0.0,
        }
    }

    /// Covariant components of a 1-form.
    pub fn as_covector(&self) -> [f64; DIM] {
        debug_assert_eq!(self.grade, 1);
        [self.comps[0], self.comps[1], self.comps[2], self.comps[3]]
    }

    /// The 4×4 antisymmetric matrix `F_{μν}` of a 2-form.
    pub fn to_matrix(&self) -> [[f64; DIM]; DIM] {
        debug_assert_eq!(self.grade, 2);
        let mut m = [[0.0; DIM]; DIM];
        for (k, &mask) in BASIS[2].iter().enumerate() {
            let ij = mask_indices(mask);
            m[ij[0]][ij[1]] = self.comps[k];
            m[ij[1]][ij[0]] = -self.comps[k];
        }
        m
    }

    /// 2-form from the upper triangle of an antisymmetric matrix.
    pub fn from_matrix(m: &[[f64; DIM]; DIM]) -> Self {
        let mut f = KForm::zero(2);
        for (k, &mask) in BASIS[2].iter().enumerate() {
            let ij = mask_indices(mask);
            f.comps[k] = m[ij[0]][ij[1]];
        }
        f
    }

    /// Largest absolute component.
    pub fn max_abs(&self) -> f64 {
        self.components().iter().fold(0.0, |a, &c| a.max(c.abs()))
    }

    pub fn is_finite(&self) -> bool {
        self.components().iter().all(|c| c.is_finite())
    }

    fn check_same_grade(&self, other: &KForm, op: &str) {
        assert_eq!(
            self.grade, other.grade,
            "{op} of forms with grades {} and {}",
            self.grade, other.grade
        );
    }
}

impl fmt::Debug for KForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "KForm<{}>{:?}", self.grade, self.components())
    }
}

impl fmt::Display for KForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, &mask) in BASIS[self.grade].iter().enumerate() {
            let c = self.comps[k];
            if c == 0.0 {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{c}")?;
            if mask != 0 {
                write!(f, " {}", monomial_name(mask))?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// Human-readable name of a basis monomial, e.g. `dx∧dy`.
pub fn monomial_name(mask: u8) -> String {
    if mask == 0 {
        return "1".to_string();
    }
    mask_indices(mask)
        .iter()
        .map(|&i| COORD_NAMES[i])
        .collect::<Vec<_>>()
        .join("∧")
}

/// 1-based multi-index of a mask, e.g. `(1,2)`.
pub fn multi_index_label(mask: u8) -> String {
    let idx: Vec<String> = mask_indices(mask).iter().map(|i| (i + 1).to_string()).collect();
    format!("({})", idx.join(","))
}

impl Add for KForm {
    type Output = KForm;
    fn add(mut self, rhs: KForm) -> KForm {
        self.check_same_grade(&rhs, "sum");
        for (a, b) in self.comps.iter_mut().zip(rhs.comps.iter()) {
            *a += b;
        }
        self
    }
}

impl Sub for KForm {
    type Output = KForm;
    fn sub(self, rhs: KForm) -> KForm {
        self + (-rhs)
    }
}

impl Neg for KForm {
    type Output = KForm;
    fn neg(mut self) -> KForm {
        for c in self.comps.iter_mut() {
            *c = -*c;
        }
        self
    }
}

impl Mul<f64> for KForm {
    type Output = KForm;
    fn mul(mut self, s: f64) -> KForm {
        for c in self.comps.iter_mut() {
            *c *= s;
        }
        self
    }
}

/// A contravariant 4-vector.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Vector4(pub [f64; DIM]);

impl Vector4 {
    pub fn components(&self) -> [f64; DIM] {
        self.0
    }

    pub fn norm_inf(&self) -> f64 {
        self.0.iter().fold(0.0, |a, &c| a.max(c.abs()))
    }

    /// `η(v, v)`.
    pub fn interval(&self) -> f64 {
        let eta = MetricSignature::MINKOWSKI.diag();
        (0..DIM).map(|i| eta[i] * self.0[i] * self.0[i]).sum()
    }
}

/// Exterior product.
pub fn wedge(a: &KForm, b: &KForm) -> Result<KForm> {
    let grade = a.grade + b.grade;
    if grade > DIM {
        return Err(Error::Degree(format!(
            "wedge of grades {} and {} overflows dimension {DIM}",
            a.grade, b.grade
        )));
    }
    let mut out = KForm::zero(grade);
    for (i, &ma) in BASIS[a.grade].iter().enumerate() {
        let ca = a.comps[i];
        if ca == 0.0 {
            continue;
        }
        for (j, &mb) in BASIS[b.grade].iter().enumerate() {
            let cb = b.comps[j];
            if cb == 0.0 {
                continue;
            }
            let s = wedge_sign(ma, mb);
            if s != 0.0 {
                out.comps[position(ma | mb)] += s * ca * cb;
            }
        }
    }
    Ok(out)
}

/// Induced metric pairing `η(α, β)` on forms of equal grade.
pub fn metric_pairing(a: &KForm, b: &KForm) -> Result<f64> {
    if a.grade != b.grade {
        return Err(Error::Degree(format!("pairing of grades {} and {}", a.grade, b.grade)));
    }
    let eta = MetricSignature::MINKOWSKI;
    Ok(BASIS[a.grade]
        .iter()
        .enumerate()
        .map(|(k, &m)| eta.mask_factor(m) * a.comps[k] * b.comps[k])
        .sum())
}

/// The η-corresponding tangent vector of a 1-form.
pub fn raise(a: &KForm) -> Vector4 {
    debug_assert_eq!(a.grade, 1);
    let eta = MetricSignature::MINKOWSKI.diag();
    Vector4(std::array::from_fn(|i| eta[i] * a.comps[i]))
}

/// The η-corresponding 1-form of a tangent vector.
pub fn lower(v: &Vector4) -> KForm {
    let eta = MetricSignature::MINKOWSKI.diag();
    KForm::covector(std::array::from_fn(|i| eta[i] * v.0[i]))
}

/// One row of the star table: `⋆e_source = sign · e_target`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StarEntry {
    pub source: u8,
    pub target: u8,
    pub sign: i8,
}

/// Hodge star on every basis monomial, derived from the defining relation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StarTable {
    entries: [StarEntry; 16],
}

impl StarTable {
    pub fn entries(&self) -> &[StarEntry; 16] {
        &self.entries
    }

    pub fn lookup(&self, source: u8) -> StarEntry {
        self.entries[source as usize]
    }

    /// Entries grouped by grade, lexicographic within each grade.
    pub fn ordered(&self) -> Vec<StarEntry> {
        BASIS
            .iter()
            .flat_map(|g| g.iter().map(|&m| self.entries[m as usize]))
            .collect()
    }

    /// Text rendering: `grade multi-index -> sign multi-index`, one line per
    /// basis element.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for e in self.ordered() {
            out.push_str(&format!(
                "{} {} -> {} {}\n",
                e.source.count_ones(),
                multi_index_label(e.source),
                if e.sign > 0 { "+" } else { "-" },
                multi_index_label(e.target)
            ));
        }
        out
    }
}

/// Solves `α∧⋆β = (−1)^{ind η} η(α,β) ω_o` for every basis β.
///
/// For each β, every candidate monomial of complementary grade and both signs
/// is tested against all basis α of β's grade. Exactly one candidate must
/// satisfy the relation.
pub fn derive_star_table() -> Result<StarTable> {
    let eta = MetricSignature::MINKOWSKI;
    let factor = eta.index_factor();
    let omega = KForm::volume();
    let placeholder = StarEntry {
        source: 0,
        target: 0,
        sign: 0,
    };
    let mut entries = [placeholder; 16];
    for grade in 0..=DIM {
        for &beta_mask in BASIS[grade] {
            let beta = KForm::basis(beta_mask);
            let mut found: Option<StarEntry> = None;
            for &target in BASIS[DIM - grade] {
                for sign in [1i8, -1] {
                    let candidate = KForm::basis(target) * f64::from(sign);
                    let holds = BASIS[grade].iter().all(|&alpha_mask| {
                        let alpha = KForm::basis(alpha_mask);
                        let lhs = wedge(&alpha, &candidate).expect("complementary grades");
                        let rhs = omega * (factor * metric_pairing(&alpha, &beta).expect("same grade"));
                        lhs == rhs
                    });
                    if holds {
                        if found.is_some() {
                            return Err(Error::Invariant(format!(
                                "star of {} is not unique",
                                monomial_name(beta_mask)
                            )));
                        }
                        found = Some(StarEntry {
                            source: beta_mask,
                            target,
                            sign,
                        });
                    }
                }
            }
            entries[beta_mask as usize] =
                found.ok_or_else(|| Error::Invariant(format!("no star for {}", monomial_name(beta_mask))))?;
        }
    }
    Ok(StarTable { entries })
}

/// Process-wide star table, derived on first use.
pub fn star_table() -> &'static StarTable {
    static TABLE: OnceLock<StarTable> = OnceLock::new();
    TABLE.get_or_init(|| derive_star_table().expect("star table derivation is consistent"))
}

/// Hodge star.
pub fn hodge(a: &KForm) -> KForm {
    let table = star_table();
    let mut out = KForm::zero(DIM - a.grade);
    for (k, &m) in BASIS[a.grade].iter().enumerate() {
        let e = table.lookup(m);
        out.comps[position(e.target)] += f64::from(e.sign) * a.comps[k];
    }
    out
}

/// `i(K̄)G = Σ_{μ<ν} K^{μν} G_{μνσ} dx^σ` for a 2-form `K` and 3-form `G`.
pub fn interior_2_3(k: &KForm, g: &KForm) -> Result<KForm> {
    if k.grade != 2 || g.grade != 3 {
        return Err(Error::Degree(format!(
            "interior product needs grades (2, 3), got ({}, {})",
            k.grade, g.grade
        )));
    }
    let eta = MetricSignature::MINKOWSKI;
    let mut out = [0.0; DIM];
    for (kk, &mask) in BASIS[2].iter().enumerate() {
        let raised = eta.mask_factor(mask) * k.comps[kk];
        if raised == 0.0 {
            continue;
        }
        let mn = mask_indices(mask);
        for (sigma, o) in out.iter_mut().enumerate() {
            *o += raised * g.tensor(&[mn[0], mn[1], sigma]);
        }
    }
    Ok(KForm::covector(out))
}

#[cfg(test)]
mod tests {
    use super::*;

    const DX: usize = 0;
    const DY: usize = 1;
    const DZ: usize = 2;
    const DXI: usize = 3;

    #[test]
    fn wedge_basis_products() {
        let dx = KForm::dx(DX);
        let dy = KForm::dx(DY);
        let dz = KForm::dx(DZ);
        assert_eq!(wedge(&dx, &dx).unwrap(), KForm::zero(2));
        let xy = wedge(&dx, &dy).unwrap();
        assert_eq!(xy.components(), &[1.0, 0.0, 0.0, 0.0, 0.0, 0.0]);
        let zx = wedge(&dz, &dx).unwrap();
        assert_eq!(zx.get(0b0101), -1.0);
    }

    #[test]
    fn wedge_overflow_is_degree_error() {
        let a = KForm::basis(0b0111);
        let b = KForm::basis(0b0011);
        assert!(matches!(wedge(&a, &b), Err(Error::Degree(_))));
    }

    #[test]
    fn pairing_examples() {
        let dx = KForm::dx(DX);
        assert_eq!(metric_pairing(&dx, &dx).unwrap(), -1.0);
        let xy = KForm::monomial(&[DX, DY]);
        assert_eq!(metric_pairing(&xy, &xy).unwrap(), 1.0);
        let zxi = KForm::monomial(&[DZ, DXI]);
        assert_eq!(metric_pairing(&zxi, &zxi).unwrap(), -1.0);
        assert!(matches!(metric_pairing(&dx, &xy), Err(Error::Degree(_))));
    }

    #[test]
    fn musical_isomorphisms() {
        let eps = -1.0;
        let zeta = lower(&Vector4([0.0, 0.0, -eps, 1.0]));
        assert_eq!(zeta.as_covector(), [0.0, 0.0, eps, 1.0]);
        let (u, p) = (0.3, -1.7);
        let a = KForm::covector([u, p, 0.0, 0.0]);
        assert_eq!(raise(&a).0, [-u, -p, 0.0, 0.0]);
        assert_eq!(raise(&KForm::dx(DXI)).0, [0.0, 0.0, 0.0, 1.0]);
        assert_eq!(lower(&raise(&a)), a);
    }

    #[test]
    fn star_table_examples() {
        let t = derive_star_table().unwrap();
        assert_eq!(
            t.lookup(0),
            StarEntry {
                source: 0,
                target: 0b1111,
                sign: -1
            }
        );
        assert_eq!(t.lookup(0b1111).target, 0);
        assert_eq!(t.lookup(0b1111).sign, 1);
        assert_eq!(t.lookup(0b0111).target, 0b1000);
        assert_eq!(t.lookup(0b0111).sign, 1);
        assert_eq!(t.render().lines().count(), 16);
    }

    #[test]
    fn hodge_examples() {
        let xy = KForm::monomial(&[DX, DY]);
        let zxi = KForm::monomial(&[DZ, DXI]);
        assert_eq!(hodge(&xy), -zxi);
        assert_eq!(hodge(&zxi), xy);
        assert_eq!(hodge(&hodge(&xy)), -xy);
    }

    #[test]
    fn interior_examples() {
        let k = KForm::monomial(&[DX, DZ]);
        let g = KForm::monomial(&[DX, DZ, DXI]);
        assert_eq!(interior_2_3(&k, &g).unwrap(), KForm::dx(DXI));

        let k = KForm::monomial(&[DX, DY]);
        assert_eq!(interior_2_3(&k, &g).unwrap(), KForm::zero(1));

        let k = KForm::monomial(&[DX, DXI]);
        let g = KForm::monomial(&[DX, DXI, DY]);
        assert_eq!(interior_2_3(&k, &g).unwrap(), -KForm::dx(DY));

        assert!(interior_2_3(&g, &k).is_err());
    }

    #[test]
    fn index_readings_agree() {
        let eta = MetricSignature::MINKOWSKI;
        assert_eq!(eta.index(), 3);
        assert_eq!(eta.index_factor(), -1.0);
    }

    #[test]
    fn matrix_round_trip() {
        let f = KForm::from_components(2, &[1.0, 2.0, 3.0, 4.0, 5.0, 6.0]).unwrap();
        let m = f.to_matrix();
        assert_eq!(m[2][0], -2.0);
        assert_eq!(KForm::from_matrix(&m), f);
        assert_eq!(f.tensor(&[3, 1]), -5.0);
    }
}
