//! Finitely generated abelian groups given by integer presentations.
//!
//! A group is `ZZ^n / L` where the columns of a relation matrix span `L`.
//! Elements are integer vectors in the presentation coordinates. Every group
//! caches its Smith normal form so elements can be reduced and the
//! invariant factors read off; maps between groups are integer matrices on
//! presentation coordinates.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Dense integer matrix, row-major.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    /// Builds a matrix from rows. `cols` is needed when `rows` is empty.
    pub fn from_rows(rows: &[Vec<i64>], cols: usize) -> Self {
        let mut m = Self::zeros(rows.len(), cols);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), cols, "ragged matrix");
            for (j, &x) in row.iter().enumerate() {
                m[(i, j)] = BigInt::from(x);
            }
        }
        m
    }

    /// Builds a matrix whose columns are the given vectors of length `rows`.
    pub fn from_columns(cols: &[Vec<BigInt>], rows: usize) -> Self {
        let mut m = Self::zeros(rows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            assert_eq!(c.len(), rows, "ragged matrix");
            for (i, x) in c.iter().enumerate() {
                m[(i, j)] = x.clone();
            }
        }
        m
    }

    pub fn diagonal(entries: &[i64]) -> Self {
        let mut m = Self::zeros(entries.len(), entries.len());
        for (i, &x) in entries.iter().enumerate() {
            m[(i, i)] = BigInt::from(x);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn column(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn row(&self, i: usize) -> Vec<BigInt> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn columns(&self) -> Vec<Vec<BigInt>> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut m = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m[(j, i)] = self[(i, j)].clone();
            }
        }
        m
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut m = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let prod = a * &other[(k, j)];
                    m[(i, j)] += prod;
                }
            }
        }
        m
    }

    pub fn apply(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(self.cols, v.len(), "dimension mismatch");
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| &self[(i, j)] * &v[j]).sum())
            .collect()
    }

    pub fn sub(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        IntMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn neg(&self) -> IntMatrix {
        IntMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| -a).collect(),
        }
    }

    /// `[self | other]`.
    pub fn hstack(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.rows, other.rows, "row mismatch");
        let mut m = Self::zeros(self.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m[(i, j)] = self[(i, j)].clone();
            }
            for j in 0..other.cols {
                m[(i, self.cols + j)] = other[(i, j)].clone();
            }
        }
        m
    }

    pub fn select_rows(&self, idx: &[usize]) -> IntMatrix {
        let mut m = Self::zeros(idx.len(), self.cols);
        for (r, &i) in idx.iter().enumerate() {
            for j in 0..self.cols {
                m[(r, j)] = self[(i, j)].clone();
            }
        }
        m
    }

    pub fn select_columns(&self, idx: &[usize]) -> IntMatrix {
        let mut m = Self::zeros(self.rows, idx.len());
        for i in 0..self.rows {
            for (c, &j) in idx.iter().enumerate() {
                m[(i, c)] = self[(i, j)].clone();
            }
        }
        m
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn det(&self) -> BigInt {
        assert!(self.is_square(), "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut a = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a[(k, k)].is_zero() {
                match (k + 1..n).find(|&i| !a[(i, k)].is_zero()) {
                    Some(i) => {
                        a.swap_rows(i, k);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (&a[(i, j)] * &a[(k, k)] - &a[(i, k)] * &a[(k, j)]) / &prev;
                    a[(i, j)] = v;
                }
            }
            prev = a[(k, k)].clone();
        }
        sign * &a[(n - 1, n - 1)]
    }

    pub fn is_unimodular(&self) -> bool {
        self.is_square() && self.det().abs().is_one()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.data.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }

    /// `row[dst] += c * row[src]`
    fn add_row(&mut self, dst: usize, src: usize, c: &BigInt) {
        for j in 0..self.cols {
            let v = c * &self[(src, j)];
            self[(dst, j)] += v;
        }
    }

    /// `col[dst] += c * col[src]`
    fn add_col(&mut self, dst: usize, src: usize, c: &BigInt) {
        for i in 0..self.rows {
            let v = c * &self[(i, src)];
            self[(i, dst)] += v;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let v = -&self[(i, j)];
            self[(i, j)] = v;
        }
    }

    fn negate_col(&mut self, j: usize) {
        for i in 0..self.rows {
            let v = -&self[(i, j)];
            self[(i, j)] = v;
        }
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;

    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for i in 0..self.rows {
            if i > 0 {
                f.write_str(", ")?;
            }
            f.write_str("[")?;
            for j in 0..self.cols {
                if j > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "{}", self[(i, j)])?;
            }
            f.write_str("]")?;
        }
        f.write_str("]")
    }
}

/// `U * M * V = S` with `U`, `V` unimodular and `S` diagonal, its diagonal a
/// divisibility chain of non-negative entries (zeros last).
#[derive(Debug, Clone)]
pub struct SmithForm {
    pub u: IntMatrix,
    pub u_inv: IntMatrix,
    pub s: IntMatrix,
    pub v: IntMatrix,
}

impl SmithForm {
    /// Diagonal of `S`, of length `min(rows, cols)`.
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.s.rows.min(self.s.cols)).map(|i| self.s[(i, i)].clone()).collect()
    }

    pub fn rank(&self) -> usize {
        self.diagonal().iter().filter(|x| !x.is_zero()).count()
    }
}

/// Smith normal form. The pivot at each step is the first entry of least
/// absolute value in row-major order, so the output is deterministic.
pub fn smith_normal_form(m: &IntMatrix) -> SmithForm {
    let (r, c) = (m.rows, m.cols);
    let mut a = m.clone();
    let mut u = IntMatrix::identity(r);
    let mut u_inv = IntMatrix::identity(r);
    let mut v = IntMatrix::identity(c);

    for t in 0..r.min(c) {
        loop {
            let mut pivot: Option<(usize, usize)> = None;
            for i in t..r {
                for j in t..c {
                    if a[(i, j)].is_zero() {
                        continue;
                    }
                    if pivot.is_none_or(|(pi, pj)| a[(i, j)].abs() < a[(pi, pj)].abs()) {
                        pivot = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = pivot else {
                return SmithForm { u, u_inv, s: a, v };
            };
            a.swap_rows(t, pi);
            u.swap_rows(t, pi);
            u_inv.swap_cols(t, pi);
            a.swap_cols(t, pj);
            v.swap_cols(t, pj);

            let p = a[(t, t)].clone();
            let mut dirty = false;
            for i in t + 1..r {
                if a[(i, t)].is_zero() {
                    continue;
                }
                let q = &a[(i, t)] / &p;
                if !q.is_zero() {
                    let nq = -&q;
                    a.add_row(i, t, &nq);
                    u.add_row(i, t, &nq);
                    u_inv.add_col(t, i, &q);
                }
                dirty |= !a[(i, t)].is_zero();
            }
            for j in t + 1..c {
                if a[(t, j)].is_zero() {
                    continue;
                }
                let q = &a[(t, j)] / &p;
                if !q.is_zero() {
                    let nq = -&q;
                    a.add_col(j, t, &nq);
                    v.add_col(j, t, &nq);
                }
                dirty |= !a[(t, j)].is_zero();
            }
            if dirty {
                continue;
            }
            let offender = (t + 1..r).find(|&i| (t + 1..c).any(|j| !a[(i, j)].is_multiple_of(&p)));
            match offender {
                Some(i) => {
                    let one = BigInt::one();
                    a.add_row(t, i, &one);
                    u.add_row(t, i, &one);
                    u_inv.add_col(i, t, &-one);
                }
                None => break,
            }
        }
        if a[(t, t)].is_negative() {
            a.negate_row(t);
            u.negate_row(t);
            u_inv.negate_col(t);
        }
    }
    SmithForm { u, u_inv, s: a, v }
}

/// A basis (as matrix columns) of the integer kernel of `m`.
pub fn integer_kernel(m: &IntMatrix) -> IntMatrix {
    let snf = smith_normal_form(m);
    let rank = snf.rank();
    let idx: Vec<usize> = (rank..m.cols).collect();
    snf.v.select_columns(&idx)
}

/// An integer solution of `m x = b`, if one exists.
pub fn solve(m: &IntMatrix, b: &[BigInt]) -> Option<Vec<BigInt>> {
    assert_eq!(m.rows, b.len(), "dimension mismatch");
    let snf = smith_normal_form(m);
    let ub = snf.u.apply(b);
    let mut z = vec![BigInt::zero(); m.cols];
    for (i, val) in ub.iter().enumerate() {
        let s = if i < m.cols { snf.s[(i, i)].clone() } else { BigInt::zero() };
        if s.is_zero() {
            if !val.is_zero() {
                return None;
            }
        } else {
            let (q, rem) = val.div_rem(&s);
            if !rem.is_zero() {
                return None;
            }
            z[i] = q;
        }
    }
    Some(snf.v.apply(&z))
}

/// `ZZ^n / L`, with its Smith form cached.
#[derive(Debug, Clone)]
pub struct FGAbelianGroup {
    gens: usize,
    relations: IntMatrix,
    to_canonical: IntMatrix,
    from_canonical: IntMatrix,
    /// Modulus of each canonical coordinate: 1 trivial, 0 free.
    moduli: Vec<BigInt>,
}

impl FGAbelianGroup {
    /// `ZZ^rows` modulo the column span of `relations`.
    pub fn from_relations(relations: IntMatrix) -> Self {
        let snf = smith_normal_form(&relations);
        let n = relations.rows;
        let diag = snf.diagonal();
        let moduli = (0..n).map(|i| diag.get(i).cloned().unwrap_or_else(BigInt::zero)).collect();
        FGAbelianGroup {
            gens: n,
            relations,
            to_canonical: snf.u,
            from_canonical: snf.u_inv,
            moduli,
        }
    }

    pub fn free(rank: usize) -> Self {
        Self::from_relations(IntMatrix::zeros(rank, 0))
    }

    /// `ZZ^free ⊕ ⊕ ZZ/m_i`.
    pub fn from_invariants(free_rank: usize, torsion: &[i64]) -> Self {
        let n = free_rank + torsion.len();
        let mut rel = IntMatrix::zeros(n, torsion.len());
        for (k, &m) in torsion.iter().enumerate() {
            rel[(free_rank + k, k)] = BigInt::from(m);
        }
        Self::from_relations(rel)
    }

    pub fn gens(&self) -> usize {
        self.gens
    }

    pub fn relations(&self) -> &IntMatrix {
        &self.relations
    }

    pub fn free_rank(&self) -> usize {
        self.moduli.iter().filter(|m| m.is_zero()).count()
    }

    /// Invariant factors `d_1 | d_2 | ... | d_k`, all at least 2.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        self.moduli.iter().filter(|m| **m > BigInt::one()).cloned().collect()
    }

    pub fn is_finite(&self) -> bool {
        self.free_rank() == 0
    }

    pub fn is_trivial(&self) -> bool {
        self.moduli.iter().all(One::is_one)
    }

    pub fn order(&self) -> Option<BigInt> {
        self.is_finite().then(|| self.moduli.iter().product())
    }

    /// Same free rank and invariant factors.
    pub fn is_isomorphic(&self, other: &FGAbelianGroup) -> bool {
        self.free_rank() == other.free_rank() && self.invariant_factors() == other.invariant_factors()
    }

    /// Canonical coordinates of `x`, torsion coordinates reduced into `[0, m)`.
    pub fn reduce(&self, x: &[BigInt]) -> Vec<BigInt> {
        self.to_canonical
            .apply(x)
            .into_iter()
            .zip(&self.moduli)
            .map(|(y, m)| if m.is_zero() { y } else { y.mod_floor(m) })
            .collect()
    }

    pub fn is_zero_element(&self, x: &[BigInt]) -> bool {
        self.reduce(x).iter().all(Zero::is_zero)
    }

    pub fn elements_equal(&self, x: &[BigInt], y: &[BigInt]) -> bool {
        let diff: Vec<BigInt> = x.iter().zip(y).map(|(a, b)| a - b).collect();
        self.is_zero_element(&diff)
    }

    /// Presentation vector of canonical generator `i`.
    pub fn canonical_generator(&self, i: usize) -> Vec<BigInt> {
        self.from_canonical.column(i)
    }

    /// Every element of a finite group, as presentation vectors.
    pub fn elements(&self) -> Result<Vec<Vec<BigInt>>> {
        if !self.is_finite() {
            return Err(Error::NotFinite);
        }
        let mut coords = vec![vec![]];
        for m in &self.moduli {
            let mut next = Vec::new();
            let mut k = BigInt::zero();
            while &k < m {
                for c in &coords {
                    let mut c2 = c.clone();
                    c2.push(k.clone());
                    next.push(c2);
                }
                k += 1;
            }
            coords = next;
        }
        Ok(coords.into_iter().map(|c| self.from_canonical.apply(&c)).collect())
    }

    /// An isomorphic group whose generators are the non-trivial canonical
    /// coordinates, with the isomorphisms both ways.
    pub fn simplify(&self) -> (FGAbelianGroup, GroupHom, GroupHom) {
        let keep: Vec<usize> = (0..self.gens).filter(|&i| !self.moduli[i].is_one()).collect();
        let mut rel = IntMatrix::zeros(keep.len(), 0);
        let torsion: Vec<usize> = (0..keep.len()).filter(|&k| !self.moduli[keep[k]].is_zero()).collect();
        if !torsion.is_empty() {
            rel = IntMatrix::zeros(keep.len(), torsion.len());
            for (c, &k) in torsion.iter().enumerate() {
                rel[(k, c)] = self.moduli[keep[k]].clone();
            }
        }
        let simple = FGAbelianGroup::from_relations(rel);
        let to = GroupHom {
            source: self.clone(),
            target: simple.clone(),
            matrix: self.to_canonical.select_rows(&keep),
        };
        let from = GroupHom {
            source: simple.clone(),
            target: self.clone(),
            matrix: self.from_canonical.select_columns(&keep),
        };
        (simple, to, from)
    }

    /// Whether `f` maps the relation lattice into itself.
    pub fn admits(&self, f: &Endo) -> bool {
        f.matrix.rows == self.gens
            && f.matrix.cols == self.gens
            && self
                .relations
                .columns()
                .iter()
                .all(|r| self.is_zero_element(&f.matrix.apply(r)))
    }

    fn check_endo(&self, f: &Endo) -> Result<()> {
        if self.admits(f) {
            Ok(())
        } else {
            Err(Error::IncompatibleAction(format!("{} does not preserve the relations", f.matrix)))
        }
    }

    pub fn identity_hom(&self) -> GroupHom {
        GroupHom {
            source: self.clone(),
            target: self.clone(),
            matrix: IntMatrix::identity(self.gens),
        }
    }
}

impl fmt::Display for FGAbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        match self.free_rank() {
            0 => {}
            1 => parts.push("Z".into()),
            r => parts.push(format!("Z^{r}")),
        }
        for d in self.invariant_factors() {
            parts.push(format!("Z/{d}"));
        }
        if parts.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&parts.join(" + "))
        }
    }
}

/// An endomorphism given by its matrix on presentation generators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Endo {
    pub matrix: IntMatrix,
}

impl Endo {
    pub fn new(matrix: IntMatrix) -> Self {
        assert!(matrix.is_square(), "endomorphism matrix must be square");
        Endo { matrix }
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        Self::new(IntMatrix::from_rows(rows, rows.len()))
    }

    pub fn identity(n: usize) -> Self {
        Endo::new(IntMatrix::identity(n))
    }

    pub fn scalar(n: usize, c: i64) -> Self {
        Endo::new(IntMatrix::diagonal(&vec![c; n]))
    }

    pub fn minus_identity(&self) -> IntMatrix {
        self.matrix.sub(&IntMatrix::identity(self.matrix.rows))
    }
}

/// A homomorphism `source -> target` given on presentation coordinates.
#[derive(Debug, Clone)]
pub struct GroupHom {
    pub source: FGAbelianGroup,
    pub target: FGAbelianGroup,
    pub matrix: IntMatrix,
}

/// A subgroup presented abstractly together with its inclusion.
#[derive(Debug, Clone)]
pub struct Subgroup {
    pub group: FGAbelianGroup,
    pub inclusion: GroupHom,
}

/// A quotient together with its projection.
#[derive(Debug, Clone)]
pub struct Quotient {
    pub group: FGAbelianGroup,
    pub projection: GroupHom,
}

impl GroupHom {
    /// Checks that the matrix sends relations to relations.
    pub fn new(source: FGAbelianGroup, target: FGAbelianGroup, matrix: IntMatrix) -> Result<Self> {
        if matrix.rows != target.gens || matrix.cols != source.gens {
            return Err(Error::IncompatibleAction("map has the wrong shape".into()));
        }
        let ok = source
            .relations
            .columns()
            .iter()
            .all(|r| target.is_zero_element(&matrix.apply(r)));
        if !ok {
            return Err(Error::IncompatibleAction("map does not respect relations".into()));
        }
        Ok(GroupHom { source, target, matrix })
    }

    pub fn apply(&self, x: &[BigInt]) -> Vec<BigInt> {
        self.matrix.apply(x)
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &GroupHom) -> GroupHom {
        assert_eq!(self.target.gens, other.source.gens, "maps do not compose");
        GroupHom {
            source: self.source.clone(),
            target: other.target.clone(),
            matrix: other.matrix.mul(&self.matrix),
        }
    }

    pub fn kernel(&self) -> Subgroup {
        // x with H x in L_target: kernel of [H | R_target], first block.
        let stacked = self.matrix.hstack(&self.target.relations);
        let ker = integer_kernel(&stacked);
        let idx: Vec<usize> = (0..self.source.gens).collect();
        subgroup_generated(&self.source, &ker.select_rows(&idx))
    }

    pub fn image(&self) -> Subgroup {
        subgroup_generated(&self.target, &self.matrix)
    }

    pub fn cokernel(&self) -> Quotient {
        let rel = self.target.relations.hstack(&self.matrix);
        let group = FGAbelianGroup::from_relations(rel);
        let projection = GroupHom {
            source: self.target.clone(),
            target: group.clone(),
            matrix: IntMatrix::identity(self.target.gens),
        };
        Quotient { group, projection }
    }

    pub fn is_injective(&self) -> bool {
        self.kernel().group.is_trivial()
    }

    pub fn is_surjective(&self) -> bool {
        self.cokernel().group.is_trivial()
    }

    pub fn is_zero(&self) -> bool {
        self.matrix.columns().iter().all(|c| self.target.is_zero_element(c))
    }

    /// Whether the two maps agree on every generator.
    pub fn agrees_with(&self, other: &GroupHom) -> bool {
        (0..self.source.gens).all(|j| self.target.elements_equal(&self.matrix.column(j), &other.matrix.column(j)))
    }
}

/// The subgroup of `a` generated by the columns of `gens`.
pub fn subgroup_generated(a: &FGAbelianGroup, gens: &IntMatrix) -> Subgroup {
    assert_eq!(gens.rows, a.gens, "generators live in the wrong group");
    let m = gens.cols;
    // c with G c in L: kernel of [G | -R], first block.
    let stacked = gens.hstack(&a.relations.neg());
    let ker = integer_kernel(&stacked);
    let idx: Vec<usize> = (0..m).collect();
    let raw = FGAbelianGroup::from_relations(ker.select_rows(&idx));
    let (group, _, from) = raw.simplify();
    let inclusion = GroupHom {
        source: group.clone(),
        target: a.clone(),
        matrix: gens.mul(&from.matrix),
    };
    Subgroup { group, inclusion }
}

/// `ZZ^rows / colspan(m)`.
pub fn cokernel(m: &IntMatrix) -> FGAbelianGroup {
    FGAbelianGroup::from_relations(m.clone())
}

/// `A / <a - g(a)>` over the listed endomorphisms. The quotient keeps the
/// generators of `A`, so each listed endomorphism induces one on it with the
/// same matrix.
pub fn coinvariants(a: &FGAbelianGroup, gens: &[Endo]) -> Result<Quotient> {
    let mut rel = a.relations.clone();
    for g in gens {
        a.check_endo(g)?;
        rel = rel.hstack(&g.minus_identity());
    }
    let group = FGAbelianGroup::from_relations(rel);
    let projection = GroupHom {
        source: a.clone(),
        target: group.clone(),
        matrix: IntMatrix::identity(a.gens),
    };
    Ok(Quotient { group, projection })
}

pub fn torsion(a: &FGAbelianGroup) -> Subgroup {
    let cols: Vec<Vec<BigInt>> = (0..a.gens)
        .filter(|&i| a.moduli[i] > BigInt::one())
        .map(|i| a.canonical_generator(i))
        .collect();
    subgroup_generated(a, &IntMatrix::from_columns(&cols, a.gens))
}

/// The `p`-primary part of the torsion subgroup.
pub fn p_torsion(a: &FGAbelianGroup, p: u64) -> Subgroup {
    let p = BigInt::from(p);
    let cols: Vec<Vec<BigInt>> = (0..a.gens)
        .filter(|&i| a.moduli[i] > BigInt::one())
        .map(|i| {
            let mut cofactor = a.moduli[i].clone();
            while cofactor.is_multiple_of(&p) {
                cofactor /= &p;
            }
            a.canonical_generator(i).into_iter().map(|x| x * &cofactor).collect()
        })
        .collect();
    subgroup_generated(a, &IntMatrix::from_columns(&cols, a.gens))
}

/// Kernel of `f - 1`.
pub fn fixed_points(a: &FGAbelianGroup, f: &Endo) -> Result<Subgroup> {
    a.check_endo(f)?;
    let hom = GroupHom {
        source: a.clone(),
        target: a.clone(),
        matrix: f.minus_identity(),
    };
    Ok(hom.kernel())
}

/// Coordinates in the source of `inclusion` of an element of its target,
/// if the element lies in the image.
pub fn lift_into(inclusion: &GroupHom, x: &[BigInt]) -> Option<Vec<BigInt>> {
    let system = inclusion.matrix.hstack(&inclusion.target.relations);
    let n = inclusion.source.gens;
    solve(&system, x).map(|sol| sol[..n].to_vec())
}

/// The map `source -> sub` through which `h: source -> ambient` factors,
/// if its image lies in `sub`.
pub fn factor_through(h: &GroupHom, sub: &Subgroup) -> Result<GroupHom> {
    let cols = (0..h.source.gens)
        .map(|j| lift_into(&sub.inclusion, &h.matrix.column(j)))
        .collect::<Option<Vec<_>>>()
        .ok_or_else(|| Error::IncompatibleAction("image is not contained in the subgroup".into()))?;
    GroupHom::new(
        h.source.clone(),
        sub.group.clone(),
        IntMatrix::from_columns(&cols, sub.group.gens),
    )
}

/// The endomorphism that `f` induces on a subgroup it preserves.
pub fn restrict(f: &Endo, sub: &Subgroup) -> Result<Endo> {
    let ambient = &sub.inclusion.target;
    ambient.check_endo(f)?;
    let n = sub.group.gens;
    let mut cols = Vec::with_capacity(n);
    for j in 0..n {
        let image = f.matrix.apply(&sub.inclusion.matrix.column(j));
        cols.push(lift_into(&sub.inclusion, &image).ok_or_else(|| Error::IncompatibleAction("subgroup is not stable".into()))?);
    }
    Ok(Endo::new(IntMatrix::from_columns(&cols, n)))
}

/// Cohomology of the procyclic group generated by an automorphism `f` of a
/// finite module: the `f`-coinvariants.
pub fn h1_cyclic(a: &FGAbelianGroup, f: &Endo) -> Result<FGAbelianGroup> {
    if !a.is_finite() {
        return Err(Error::NotFinite);
    }
    a.check_endo(f)?;
    let as_hom = GroupHom {
        source: a.clone(),
        target: a.clone(),
        matrix: f.matrix.clone(),
    };
    if !as_hom.is_injective() {
        return Err(Error::NotAutomorphism);
    }
    Ok(coinvariants(a, std::slice::from_ref(f))?.group)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn factors(a: &FGAbelianGroup) -> Vec<i64> {
        a.invariant_factors().iter().map(|x| x.try_into().unwrap()).collect()
    }

    #[test]
    fn snf_examples() {
        let id = IntMatrix::identity(2);
        assert_eq!(smith_normal_form(&id).s, id);
        let d = IntMatrix::diagonal(&[4, 6]);
        assert_eq!(smith_normal_form(&d).s, IntMatrix::diagonal(&[2, 12]));
        let z = IntMatrix::zeros(1, 1);
        assert_eq!(smith_normal_form(&z).s, z);
    }

    #[test]
    fn snf_of_rectangular_matrix() {
        let m = IntMatrix::from_rows(&[vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]], 3);
        let snf = smith_normal_form(&m);
        assert_eq!(snf.u.mul(&m).mul(&snf.v), snf.s);
        assert_eq!(snf.diagonal(), big(&[2, 6, 12]));
        assert_eq!(snf.u.mul(&snf.u_inv), IntMatrix::identity(3));
    }

    #[test]
    fn cokernel_examples() {
        assert_eq!(factors(&cokernel(&IntMatrix::diagonal(&[2, 3]))), vec![6]);
        assert_eq!(factors(&cokernel(&IntMatrix::diagonal(&[2, 2]))), vec![2, 2]);
        let free = cokernel(&IntMatrix::zeros(2, 0));
        assert_eq!((free.free_rank(), free.invariant_factors().len()), (2, 0));
    }

    #[test]
    fn coinvariant_examples() {
        let z = FGAbelianGroup::free(1);
        let q = coinvariants(&z, &[Endo::scalar(1, -1)]).unwrap();
        assert_eq!(q.group.to_string(), "Z/2");
        let a = FGAbelianGroup::from_invariants(1, &[4]);
        let same = coinvariants(&a, &[Endo::identity(2)]).unwrap();
        assert!(same.group.is_isomorphic(&a));
        let swap = Endo::from_rows(&[vec![0, 1], vec![1, 0]]);
        let q = coinvariants(&FGAbelianGroup::free(2), &[swap]).unwrap();
        assert_eq!(q.group.to_string(), "Z");
    }

    #[test]
    fn incompatible_action_is_rejected() {
        // x -> 2x on Z/2 + Z is fine; swapping Z/2 with Z is not.
        let a = FGAbelianGroup::from_invariants(1, &[2]);
        let swap = Endo::from_rows(&[vec![0, 1], vec![1, 0]]);
        assert!(matches!(coinvariants(&a, std::slice::from_ref(&swap)), Err(Error::IncompatibleAction(_))));
        assert!(matches!(fixed_points(&a, &swap), Err(Error::IncompatibleAction(_))));
    }

    #[test]
    fn torsion_examples() {
        let a = FGAbelianGroup::from_invariants(1, &[12]);
        assert_eq!(p_torsion(&a, 2).group.to_string(), "Z/4");
        assert_eq!(p_torsion(&a, 3).group.to_string(), "Z/3");
        assert_eq!(torsion(&a).group.to_string(), "Z/12");
        assert!(torsion(&FGAbelianGroup::free(3)).group.is_trivial());
        let v = FGAbelianGroup::from_invariants(0, &[2, 2]);
        assert!(p_torsion(&v, 3).group.is_trivial());
        // The inclusion lands on elements of the right order.
        let sub = p_torsion(&a, 2);
        assert!(sub.inclusion.is_injective());
    }

    #[test]
    fn fixed_point_examples() {
        let z2 = FGAbelianGroup::from_invariants(0, &[2]);
        assert_eq!(fixed_points(&z2, &Endo::identity(1)).unwrap().group.to_string(), "Z/2");
        let z = FGAbelianGroup::free(1);
        assert!(fixed_points(&z, &Endo::scalar(1, -1)).unwrap().group.is_trivial());
        let z5 = FGAbelianGroup::from_invariants(0, &[5]);
        assert!(fixed_points(&z5, &Endo::scalar(1, 2)).unwrap().group.is_trivial());
        let swap = Endo::from_rows(&[vec![0, 1], vec![1, 0]]);
        assert_eq!(fixed_points(&FGAbelianGroup::free(2), &swap).unwrap().group.to_string(), "Z");
    }

    #[test]
    fn h1_examples() {
        let z2 = FGAbelianGroup::from_invariants(0, &[2]);
        assert_eq!(h1_cyclic(&z2, &Endo::identity(1)).unwrap().to_string(), "Z/2");
        let z3 = FGAbelianGroup::from_invariants(0, &[3]);
        assert!(h1_cyclic(&z3, &Endo::scalar(1, 2)).unwrap().is_trivial());
        assert!(matches!(h1_cyclic(&FGAbelianGroup::free(1), &Endo::identity(1)), Err(Error::NotFinite)));
        let z4 = FGAbelianGroup::from_invariants(0, &[4]);
        assert!(matches!(h1_cyclic(&z4, &Endo::scalar(1, 2)), Err(Error::NotAutomorphism)));
    }

    #[test]
    fn restriction_to_torsion() {
        // Z/4 + Z with f(a) = -a on the torsion part.
        let a = FGAbelianGroup::from_invariants(1, &[4]);
        let f = Endo::from_rows(&[vec![1, 0], vec![0, -1]]);
        let t = torsion(&a);
        let g = restrict(&f, &t).unwrap();
        let x = t.inclusion.apply(&big(&[1]));
        let fx = f.matrix.apply(&x);
        let gx = t.inclusion.apply(&g.matrix.apply(&big(&[1])));
        assert!(a.elements_equal(&fx, &gx));
    }

    #[test]
    fn solve_and_kernel() {
        let m = IntMatrix::from_rows(&[vec![2, 4], vec![1, 3]], 2);
        let x = solve(&m, &big(&[6, 5])).unwrap();
        assert_eq!(m.apply(&x), big(&[6, 5]));
        let m = IntMatrix::from_rows(&[vec![2, 4]], 2);
        assert!(solve(&m, &big(&[3])).is_none());
        let k = integer_kernel(&m);
        assert_eq!(k.cols(), 1);
        assert!(m.mul(&k).is_zero());
    }

    #[test]
    fn determinant() {
        let m = IntMatrix::from_rows(&[vec![2, 1, 0], vec![1, 3, 1], vec![0, 1, 4]], 3);
        assert_eq!(m.det(), BigInt::from(18));
        let swap = IntMatrix::from_rows(&[vec![0, 1], vec![1, 0]], 2);
        assert_eq!(swap.det(), BigInt::from(-1));
        assert!(swap.is_unimodular());
    }
}
