//! Integral root data with a finite Galois action on the cocharacter
//! lattice, and the fundamental-group computations built on them.
//!
//! Coordinates: the cocharacter lattice is `ZZ^rank`, coroots are column
//! vectors in it, roots are vectors in the dual lattice, and each Galois
//! matrix acts on column vectors of cocharacters (its transpose acts on
//! characters).

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::abelian::{
    coinvariants, fixed_points, lift_into, smith_normal_form, subgroup_generated, Endo, FGAbelianGroup, GroupHom,
    IntMatrix,
    Subgroup,
};
use crate::error::{Error, Result};

/// Largest Galois image the validator will enumerate.
const MAX_GALOIS_IMAGE: usize = 4096;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GaloisGenerator {
    pub label: String,
    /// Rows of the matrix acting on cocharacters.
    pub matrix: Vec<Vec<i64>>,
}

/// A root datum with the images of wild inertia, inertia and a Frobenius lift.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RootDatumWithAction {
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub name: String,
    pub rank: usize,
    pub coroots: Vec<Vec<i64>>,
    pub roots: Vec<Vec<i64>>,
    pub galois: Vec<GaloisGenerator>,
    pub wild: Vec<String>,
    pub inertia: Vec<String>,
    pub frobenius: String,
    /// Vectors of the cocharacter lattice whose images in the cocharacters
    /// of the abelianization form a basis permuted by wild inertia.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub induced_witness: Option<Vec<Vec<i64>>>,
    /// Quasi-splitness is asserted by the input, not checked.
    #[serde(default = "yes", skip_serializing_if = "is_true")]
    pub quasi_split: bool,
}

fn yes() -> bool {
    true
}

fn is_true(b: &bool) -> bool {
    *b
}

fn to_big(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

fn mat_vec(m: &[Vec<i64>], v: &[i64]) -> Vec<i64> {
    m.iter().map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum()).collect()
}

fn mat_mul(a: &[Vec<i64>], b: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let n = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| (0..n).map(|j| row.iter().zip(b).map(|(x, r)| x * r[j]).sum()).collect())
        .collect()
}

fn transpose(m: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let n = m.first().map_or(0, Vec::len);
    (0..n).map(|j| m.iter().map(|row| row[j]).collect()).collect()
}

fn identity(n: usize) -> Vec<Vec<i64>> {
    (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect()
}

fn permutes(m: &[Vec<i64>], vectors: &[Vec<i64>]) -> bool {
    let set: BTreeSet<&Vec<i64>> = vectors.iter().collect();
    let image: BTreeSet<Vec<i64>> = vectors.iter().map(|v| mat_vec(m, v)).collect();
    image.len() == set.len() && image.iter().all(|v| set.contains(v))
}

impl RootDatumWithAction {
    pub fn from_json(text: &str) -> Result<Self> {
        let rd: RootDatumWithAction = serde_json::from_str(text).map_err(|e| Error::Parse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })?;
        rd.validate()?;
        Ok(rd)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("datum serializes")
    }

    pub fn is_torus(&self) -> bool {
        self.coroots.is_empty() && self.roots.is_empty()
    }

    pub fn matrix(&self, label: &str) -> Result<&[Vec<i64>]> {
        self.galois
            .iter()
            .find(|g| g.label == label)
            .map(|g| g.matrix.as_slice())
            .ok_or_else(|| Error::InvalidDatum(format!("unknown Galois label `{label}`")))
    }

    pub fn endo(&self, label: &str) -> Result<Endo> {
        Ok(Endo::new(IntMatrix::from_rows(self.matrix(label)?, self.rank)))
    }

    pub fn endos(&self, labels: &[String]) -> Result<Vec<Endo>> {
        labels.iter().map(|l| self.endo(l)).collect()
    }

    pub fn inertia_endos(&self) -> Result<Vec<Endo>> {
        self.endos(&self.inertia)
    }

    pub fn wild_endos(&self) -> Result<Vec<Endo>> {
        self.endos(&self.wild)
    }

    pub fn frobenius_endo(&self) -> Result<Endo> {
        self.endo(&self.frobenius)
    }

    /// Checks every structural invariant of the datum.
    pub fn validate(&self) -> Result<()> {
        let r = self.rank;
        let bad = |msg: String| Err(Error::InvalidDatum(msg));
        for (what, list) in [("coroot", &self.coroots), ("root", &self.roots)] {
            if let Some(v) = list.iter().find(|v| v.len() != r) {
                return bad(format!("{what} {v:?} does not have length {r}"));
            }
        }
        if self.coroots.len() != self.roots.len() {
            return bad("roots and coroots must be listed in matching order".into());
        }
        for (a, c) in self.roots.iter().zip(&self.coroots) {
            let pairing: i64 = a.iter().zip(c).map(|(x, y)| x * y).sum();
            if pairing != 2 {
                return bad(format!("root {a:?} pairs to {pairing} with its coroot {c:?}"));
            }
        }
        let mut labels = BTreeSet::new();
        for g in &self.galois {
            if !labels.insert(g.label.as_str()) {
                return bad(format!("Galois label `{}` repeated", g.label));
            }
            if g.matrix.len() != r || g.matrix.iter().any(|row| row.len() != r) {
                return bad(format!("matrix `{}` is not {r}x{r}", g.label));
            }
            if !IntMatrix::from_rows(&g.matrix, r).is_unimodular() {
                return bad(format!("matrix `{}` is not invertible over the integers", g.label));
            }
            if !permutes(&g.matrix, &self.coroots) {
                return bad(format!("`{}` does not permute the coroots", g.label));
            }
            if !permutes(&transpose(&g.matrix), &self.roots) {
                return bad(format!("`{}` does not permute the roots", g.label));
            }
        }
        for l in self.wild.iter().chain(&self.inertia).chain(std::iter::once(&self.frobenius)) {
            self.matrix(l)?;
        }
        if let Some(w) = self.wild.iter().find(|w| !self.inertia.contains(w)) {
            return bad(format!("wild generator `{w}` is not listed among the inertia generators"));
        }
        self.check_frobenius_normalizes_inertia()?;
        if let Some(w) = &self.induced_witness {
            if w.iter().any(|v| v.len() != r) {
                return Err(Error::InvalidWitness(format!("witness vectors must have length {r}")));
            }
        }
        Ok(())
    }

    /// Elements of the group generated by the listed matrices.
    fn generated_group(&self, labels: &[String]) -> Result<BTreeSet<Vec<Vec<i64>>>> {
        let gens: Vec<&[Vec<i64>]> = labels.iter().map(|l| self.matrix(l)).collect::<Result<_>>()?;
        let mut seen = BTreeSet::new();
        let mut queue = VecDeque::from([identity(self.rank)]);
        seen.insert(identity(self.rank));
        while let Some(x) = queue.pop_front() {
            for g in &gens {
                let y = mat_mul(g, &x);
                if seen.insert(y.clone()) {
                    if seen.len() > MAX_GALOIS_IMAGE {
                        return Err(Error::InvalidDatum(format!(
                            "inertia image has more than {MAX_GALOIS_IMAGE} elements"
                        )));
                    }
                    queue.push_back(y);
                }
            }
        }
        Ok(seen)
    }

    fn check_frobenius_normalizes_inertia(&self) -> Result<()> {
        let group = self.generated_group(&self.inertia)?;
        let f = self.matrix(&self.frobenius)?;
        for l in &self.inertia {
            let g = self.matrix(l)?;
            // F g F^-1 in H  <=>  F g = h F for some h in H.
            let fg = mat_mul(f, g);
            if !group.iter().any(|h| mat_mul(h, f) == fg) {
                return Err(Error::InvalidDatum(format!("Frobenius does not normalize `{l}`")));
            }
        }
        Ok(())
    }

    fn coroot_matrix(&self) -> IntMatrix {
        let cols: Vec<Vec<BigInt>> = self.coroots.iter().map(|c| to_big(c)).collect();
        IntMatrix::from_columns(&cols, self.rank)
    }

    /// The cocharacter lattice `ZZ^rank` as a group.
    pub fn cocharacter_lattice(&self) -> FGAbelianGroup {
        FGAbelianGroup::free(self.rank)
    }
}

/// A group with the Galois generators acting on it, by label.
#[derive(Debug, Clone)]
pub struct GroupWithAction {
    pub group: FGAbelianGroup,
    pub actions: BTreeMap<String, Endo>,
}

/// `X_*(T) / <coroots>` with the descended Galois action.
pub fn pi1(rd: &RootDatumWithAction) -> Result<GroupWithAction> {
    let group = FGAbelianGroup::from_relations(rd.coroot_matrix());
    let mut actions = BTreeMap::new();
    for g in &rd.galois {
        let e = rd.endo(&g.label)?;
        if !group.admits(&e) {
            return Err(Error::InvalidDatum(format!("`{}` does not preserve the coroot span", g.label)));
        }
        actions.insert(g.label.clone(), e);
    }
    Ok(GroupWithAction { group, actions })
}

/// `(pi1_{I})^F`, the target of the Kottwitz map.
pub fn kottwitz_target(rd: &RootDatumWithAction) -> Result<FGAbelianGroup> {
    let p = pi1(rd)?;
    let coinv = coinvariants(&p.group, &rd.inertia_endos()?)?;
    Ok(fixed_points(&coinv.group, &rd.frobenius_endo()?)?.group)
}

/// `pi1(G_der) -> pi1(G) -> X_*(G_ab)` with the Galois action on the last term.
#[derive(Debug, Clone)]
pub struct DerivedAbelianized {
    pub pi1: FGAbelianGroup,
    pub pi1_der: FGAbelianGroup,
    pub cochar_ab: FGAbelianGroup,
    pub inclusion: GroupHom,
    pub projection: GroupHom,
    /// Matrix of `X_*(T) -> X_*(G_ab)`.
    pub lattice_projection: IntMatrix,
    /// Action of each Galois generator on `X_*(G_ab)`.
    pub ab_actions: BTreeMap<String, Endo>,
    pub exact: bool,
}

pub fn derived_and_abelianized(rd: &RootDatumWithAction) -> Result<DerivedAbelianized> {
    let base = pi1(rd)?;
    let c = rd.coroot_matrix();
    let snf = smith_normal_form(&c);
    let k = snf.rank();
    let r = rd.rank;
    let sat: Vec<usize> = (0..k).collect();
    let rest: Vec<usize> = (k..r).collect();

    // (X ∩ QΦ∨) / <Φ∨> is spanned by the first k columns of U^-1.
    let Subgroup {
        group: pi1_der,
        inclusion,
    } = subgroup_generated(&base.group, &snf.u_inv.select_columns(&sat));
    let lattice_projection = snf.u.select_rows(&rest);
    let cochar_ab = FGAbelianGroup::free(r - k);
    let projection = GroupHom::new(base.group.clone(), cochar_ab.clone(), lattice_projection.clone())
        .map_err(|_| Error::Invariant("projection to X_*(G_ab) does not kill coroots".into()))?;

    let section = snf.u_inv.select_columns(&rest);
    let mut ab_actions = BTreeMap::new();
    for (label, e) in &base.actions {
        let induced = lattice_projection.mul(&e.matrix).mul(&section);
        let kills_saturation = lattice_projection
            .mul(&e.matrix)
            .mul(&snf.u_inv.select_columns(&sat))
            .is_zero();
        if !kills_saturation {
            return Err(Error::InvalidDatum(format!("`{label}` does not preserve the coroot saturation")));
        }
        ab_actions.insert(label.clone(), Endo::new(induced));
    }

    let composite_zero = inclusion.then(&projection).is_zero();
    let ker = projection.kernel();
    let ker_in_image = (0..ker.group.gens()).all(|j| {
        let v = ker.inclusion.matrix.column(j);
        lift_into(&inclusion, &v).is_some()
    });
    let exact = inclusion.is_injective() && composite_zero && ker_in_image && projection.is_surjective();
    Ok(DerivedAbelianized {
        pi1: base.group,
        pi1_der,
        cochar_ab,
        inclusion,
        projection,
        lattice_projection,
        ab_actions,
        exact,
    })
}

/// Whether `witness` is a basis of `ZZ^n` permuted by every matrix in `gens`.
pub fn is_induced_lattice(gens: &[Endo], witness: &[Vec<BigInt>], n: usize) -> Result<bool> {
    if witness.len() != n || witness.iter().any(|v| v.len() != n) {
        return Err(Error::InvalidWitness(format!("expected {n} vectors of length {n}")));
    }
    if !IntMatrix::from_columns(witness, n).is_unimodular() {
        return Ok(false);
    }
    let set: BTreeSet<&Vec<BigInt>> = witness.iter().collect();
    Ok(gens
        .iter()
        .all(|g| witness.iter().all(|v| set.contains(&g.matrix.apply(v)))))
}

/// Whether `witness` (in cocharacter coordinates) is a basis of `X_*(T)`
/// permuted by the listed Galois generators.
pub fn is_induced(rd: &RootDatumWithAction, labels: &[String], witness: &[Vec<i64>]) -> Result<bool> {
    let gens = rd.endos(labels)?;
    let w: Vec<Vec<BigInt>> = witness.iter().map(|v| to_big(v)).collect();
    is_induced_lattice(&gens, &w, rd.rank)
}

fn name(rd: RootDatumWithAction, name: &str) -> RootDatumWithAction {
    RootDatumWithAction {
        name: name.to_string(),
        ..rd
    }
}

fn generator(label: &str, matrix: Vec<Vec<i64>>) -> GaloisGenerator {
    GaloisGenerator {
        label: label.to_string(),
        matrix,
    }
}

fn unit(n: usize, i: usize) -> Vec<i64> {
    (0..n).map(|j| i64::from(i == j)).collect()
}

/// Datum with trivial Galois action (Frobenius `F` = identity).
fn split(rank: usize, coroots: Vec<Vec<i64>>, roots: Vec<Vec<i64>>) -> RootDatumWithAction {
    RootDatumWithAction {
        name: String::new(),
        rank,
        coroots,
        roots,
        galois: vec![generator("F", identity(rank))],
        wild: vec![],
        inertia: vec![],
        frobenius: "F".into(),
        induced_witness: None,
        quasi_split: true,
    }
}

pub fn split_torus(rank: usize) -> RootDatumWithAction {
    name(split(rank, vec![], vec![]), "split_torus")
}

/// Pairs `(root, coroot)` for `e_i - e_j`, `i != j`, in `ZZ^n`.
fn type_a_ambient(n: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i != j {
                out.push((i, j));
            }
        }
    }
    out
}

pub fn gl(n: usize) -> RootDatumWithAction {
    let pairs = type_a_ambient(n);
    let v = |i: usize, j: usize| {
        let mut x = vec![0; n];
        x[i] += 1;
        x[j] -= 1;
        x
    };
    let roots = pairs.iter().map(|&(i, j)| v(i, j)).collect();
    let coroots = pairs.iter().map(|&(i, j)| v(i, j)).collect();
    name(split(n, coroots, roots), &format!("gl{n}_split"))
}

/// `SL_n` on the basis `e_k - e_{k+1}` of the cocharacter lattice.
pub fn sl(n: usize) -> RootDatumWithAction {
    let r = n - 1;
    let coroot = |i: usize, j: usize| -> Vec<i64> {
        let (lo, hi, sign) = if i < j { (i, j, 1) } else { (j, i, -1) };
        (0..r).map(|k| if k >= lo && k < hi { sign } else { 0 }).collect()
    };
    let root = |i: usize, j: usize| -> Vec<i64> {
        (0..r)
            .map(|k| {
                let at = |a: usize| i64::from(a == k) - i64::from(a == k + 1);
                at(i) - at(j)
            })
            .collect()
    };
    let pairs = type_a_ambient(n);
    let roots = pairs.iter().map(|&(i, j)| root(i, j)).collect();
    let coroots = pairs.iter().map(|&(i, j)| coroot(i, j)).collect();
    name(split(r, coroots, roots), &format!("sl{n}_split"))
}

/// `PGL_n` on the images of `e_1, ..., e_{n-1}` in `ZZ^n / ZZ(1, ..., 1)`.
pub fn pgl(n: usize) -> RootDatumWithAction {
    let r = n - 1;
    let image = |k: usize| -> Vec<i64> {
        if k < r {
            unit(r, k)
        } else {
            vec![-1; r]
        }
    };
    let coroot = |i: usize, j: usize| -> Vec<i64> { image(i).iter().zip(image(j)).map(|(a, b)| a - b).collect() };
    let root = |i: usize, j: usize| -> Vec<i64> { (0..r).map(|k| i64::from(i == k) - i64::from(j == k)).collect() };
    let pairs = type_a_ambient(n);
    let roots = pairs.iter().map(|&(i, j)| root(i, j)).collect();
    let coroots = pairs.iter().map(|&(i, j)| coroot(i, j)).collect();
    name(split(r, coroots, roots), &format!("pgl{n}_split"))
}

pub fn sp4() -> RootDatumWithAction {
    let mut roots = Vec::new();
    let mut coroots = Vec::new();
    for s in [1, -1] {
        roots.push(vec![2 * s, 0]);
        coroots.push(vec![s, 0]);
        roots.push(vec![0, 2 * s]);
        coroots.push(vec![0, s]);
        roots.push(vec![s, s]);
        coroots.push(vec![s, s]);
        roots.push(vec![s, -s]);
        coroots.push(vec![s, -s]);
    }
    name(split(2, coroots, roots), "sp4_split")
}

/// Quasi-split unitary group in 3 variables for an unramified quadratic
/// extension: Frobenius swaps the two simple coroots.
pub fn su3_unramified() -> RootDatumWithAction {
    let mut rd = sl(3);
    rd.galois = vec![generator("F", vec![vec![0, 1], vec![1, 0]])];
    name(rd, "su3_unramified")
}

/// Quasi-split unitary group in 2 variables, unramified: Frobenius acts by
/// `x -> -w0 x` on the cocharacters of `GL_2`.
pub fn u2_unramified() -> RootDatumWithAction {
    let mut rd = gl(2);
    rd.galois = vec![generator("F", vec![vec![0, -1], vec![-1, 0]])];
    name(rd, "u2_unramified")
}

fn swap_torus(label: &str) -> RootDatumWithAction {
    RootDatumWithAction {
        name: String::new(),
        rank: 2,
        coroots: vec![],
        roots: vec![],
        galois: vec![generator(label, vec![vec![0, 1], vec![1, 0]]), generator("id", identity(2))],
        wild: vec![],
        inertia: vec![],
        frobenius: "id".into(),
        induced_witness: Some(vec![unit(2, 0), unit(2, 1)]),
        quasi_split: true,
    }
}

/// Restriction of scalars of `G_m` along an unramified quadratic extension.
pub fn induced_unramified() -> RootDatumWithAction {
    let mut rd = swap_torus("F");
    rd.frobenius = "F".into();
    name(rd, "induced_unramified")
}

/// Restriction of scalars along a tamely ramified quadratic extension.
pub fn induced_tame() -> RootDatumWithAction {
    let mut rd = swap_torus("sigma");
    rd.inertia = vec!["sigma".into()];
    name(rd, "induced_tame")
}

/// Restriction of scalars along a wildly ramified quadratic extension
/// (residue characteristic 2): wild inertia swaps the basis.
pub fn wild_induced_torus() -> RootDatumWithAction {
    let mut rd = swap_torus("tau");
    rd.inertia = vec!["tau".into()];
    rd.wild = vec!["tau".into()];
    name(rd, "wild_induced_torus")
}

/// Norm-one torus of a ramified quadratic extension in residue
/// characteristic 2: (wild) inertia acts by -1.
pub fn norm_one_ramified() -> RootDatumWithAction {
    RootDatumWithAction {
        name: "norm_one_ramified".into(),
        rank: 1,
        coroots: vec![],
        roots: vec![],
        galois: vec![generator("tau", vec![vec![-1]]), generator("F", vec![vec![1]])],
        wild: vec!["tau".into()],
        inertia: vec!["tau".into()],
        frobenius: "F".into(),
        induced_witness: None,
        quasi_split: true,
    }
}

/// The built-in data, by name.
pub fn catalog() -> Vec<RootDatumWithAction> {
    vec![
        split_torus(2),
        induced_unramified(),
        induced_tame(),
        wild_induced_torus(),
        norm_one_ramified(),
        sl(2),
        sl(3),
        pgl(2),
        pgl(3),
        gl(2),
        gl(3),
        sp4(),
        su3_unramified(),
        u2_unramified(),
    ]
}

pub fn catalog_entry(name: &str) -> Result<RootDatumWithAction> {
    catalog()
        .into_iter()
        .find(|rd| rd.name == name)
        .ok_or_else(|| Error::InvalidArgument(format!("no catalog entry named `{name}`")))
}

/// Tame in the sense used here: wild inertia acts trivially, or permutes the
/// supplied witness basis.
pub fn is_tame(rd: &RootDatumWithAction) -> Result<bool> {
    let wild = rd.wild_endos()?;
    if wild.iter().all(|w| w.matrix == IntMatrix::identity(rd.rank)) {
        return Ok(true);
    }
    match &rd.induced_witness {
        Some(w) if rd.is_torus() => is_induced(rd, &rd.wild, w),
        _ => Ok(false),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalog_is_valid() {
        let mut names = BTreeSet::new();
        for rd in catalog() {
            rd.validate().unwrap_or_else(|e| panic!("{}: {e}", rd.name));
            assert!(names.insert(rd.name.clone()));
            let p = pi1(&rd).unwrap();
            for (label, e) in &p.actions {
                assert!(p.group.admits(e), "{} {label}", rd.name);
            }
        }
    }

    #[test]
    fn catalog_examples() {
        let n1 = catalog_entry("norm_one_ramified").unwrap();
        assert_eq!(n1.rank, 1);
        assert_eq!(n1.matrix("tau").unwrap(), &[vec![-1]]);
        assert_eq!(n1.matrix(&n1.frobenius).unwrap(), &[vec![1]]);
        let pgl2 = catalog_entry("pgl2_split").unwrap();
        assert!(pgl2.galois.iter().all(|g| g.matrix == identity(1)));
        let su3 = catalog_entry("su3_unramified").unwrap();
        assert_eq!(su3.matrix("F").unwrap(), &[vec![0, 1], vec![1, 0]]);
        assert!(su3.inertia.is_empty());
    }

    #[test]
    fn pi1_examples() {
        assert!(pi1(&sl(2)).unwrap().group.is_trivial());
        assert!(pi1(&sl(3)).unwrap().group.is_trivial());
        assert_eq!(pi1(&pgl(2)).unwrap().group.to_string(), "Z/2");
        assert_eq!(pi1(&pgl(3)).unwrap().group.to_string(), "Z/3");
        assert_eq!(pi1(&gl(3)).unwrap().group.to_string(), "Z");
        assert_eq!(pi1(&split_torus(3)).unwrap().group.to_string(), "Z^3");
        assert!(pi1(&sp4()).unwrap().group.is_trivial());
    }

    #[test]
    fn kottwitz_examples() {
        assert_eq!(kottwitz_target(&pgl(2)).unwrap().to_string(), "Z/2");
        assert_eq!(kottwitz_target(&norm_one_ramified()).unwrap().to_string(), "Z/2");
        assert_eq!(kottwitz_target(&induced_unramified()).unwrap().to_string(), "Z");
        for rd in catalog().into_iter().filter(|rd| rd.galois.iter().all(|g| g.matrix == identity(rd.rank))) {
            let k = kottwitz_target(&rd).unwrap();
            assert!(k.is_isomorphic(&pi1(&rd).unwrap().group), "{}", rd.name);
        }
    }

    #[test]
    fn derived_examples() {
        let g = derived_and_abelianized(&gl(2)).unwrap();
        assert!(g.pi1_der.is_trivial());
        assert_eq!(g.cochar_ab.to_string(), "Z");
        assert!(g.exact);
        let p = derived_and_abelianized(&pgl(2)).unwrap();
        assert_eq!(p.pi1_der.to_string(), "Z/2");
        assert!(p.cochar_ab.is_trivial());
        let t = derived_and_abelianized(&split_torus(2)).unwrap();
        assert!(t.pi1_der.is_trivial());
        assert_eq!(t.cochar_ab.to_string(), "Z^2");
        for rd in catalog() {
            assert!(derived_and_abelianized(&rd).unwrap().exact, "{}", rd.name);
        }
    }

    #[test]
    fn induced_examples() {
        let std2 = vec![vec![1, 0], vec![0, 1]];
        assert!(is_induced(&induced_tame(), &["sigma".into()], &std2).unwrap());
        assert!(!is_induced(&norm_one_ramified(), &["tau".into()], &[vec![1]]).unwrap());
        let mut rot = induced_tame();
        rot.galois[0].matrix = vec![vec![0, 1], vec![-1, 0]];
        assert!(!is_induced(&rot, &["sigma".into()], &std2).unwrap());
        assert!(matches!(
            is_induced(&induced_tame(), &["sigma".into()], &[vec![1, 0]]),
            Err(Error::InvalidWitness(_))
        ));
        // Not a basis.
        assert!(!is_induced(&induced_tame(), &["sigma".into()], &[vec![1, 1], vec![1, 1]]).unwrap());
    }

    #[test]
    fn validation_catches_bad_data() {
        let mut rd = sl(2);
        rd.galois[0].matrix = vec![vec![2]];
        assert!(matches!(rd.validate(), Err(Error::InvalidDatum(_))));

        let mut rd = induced_tame();
        rd.wild = vec!["id".into()];
        assert!(matches!(rd.validate(), Err(Error::InvalidDatum(_))));

        let mut rd = gl(2);
        rd.galois.push(generator("shear", vec![vec![1, 1], vec![0, 1]]));
        assert!(matches!(rd.validate(), Err(Error::InvalidDatum(_))));

        // Frobenius must normalize inertia: inertia <swap> on Z^3 coordinates 1,2
        // conjugated by a cycle lands outside.
        let rd = RootDatumWithAction {
            name: String::new(),
            rank: 3,
            coroots: vec![],
            roots: vec![],
            galois: vec![
                generator("s", vec![vec![0, 1, 0], vec![1, 0, 0], vec![0, 0, 1]]),
                generator("c", vec![vec![0, 0, 1], vec![1, 0, 0], vec![0, 1, 0]]),
            ],
            wild: vec![],
            inertia: vec!["s".into()],
            frobenius: "c".into(),
            induced_witness: None,
            quasi_split: true,
        };
        assert!(matches!(rd.validate(), Err(Error::InvalidDatum(_))));
    }

    #[test]
    fn json_round_trip() {
        for rd in catalog() {
            let back = RootDatumWithAction::from_json(&rd.to_json()).unwrap();
            assert_eq!(back, rd);
        }
        match RootDatumWithAction::from_json("{\"rank\": 1,\n \"coroots\": [}") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("unexpected {other:?}"),
        }
    }
}
