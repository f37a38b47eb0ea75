use blockatlas::abelian::{
    coinvariants, fixed_points, integer_kernel, p_torsion, smith_normal_form, solve, torsion, Endo, FGAbelianGroup,
    IntMatrix,
};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

fn random_matrix(rng: &mut StdRng, rows: usize, cols: usize, bound: i64) -> Vec<Vec<i64>> {
    (0..rows)
        .map(|_| (0..cols).map(|_| rng.gen_range(-bound..=bound)).collect())
        .collect()
}

fn mat(rows: &[Vec<i64>], cols: usize) -> IntMatrix {
    IntMatrix::from_rows(rows, cols)
}

/// A random unimodular matrix and its inverse, built from elementary moves.
fn random_unimodular(rng: &mut StdRng, n: usize, steps: usize) -> (Vec<Vec<i64>>, Vec<Vec<i64>>) {
    let mut w: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect();
    let mut w_inv = w.clone();
    if n < 2 {
        return (w, w_inv);
    }
    for _ in 0..steps {
        let i = rng.gen_range(0..n);
        let mut j = rng.gen_range(0..n - 1);
        if j >= i {
            j += 1;
        }
        let c = rng.gen_range(-2..=2);
        // W <- E W with E = I + c e_ij; W^-1 <- W^-1 E^-1.
        for k in 0..n {
            let add = c * w[j][k];
            w[i][k] += add;
        }
        for row in w_inv.iter_mut() {
            let sub = c * row[i];
            row[j] -= sub;
        }
    }
    (w, w_inv)
}

fn mul(a: &[Vec<i64>], b: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let n = b[0].len();
    a.iter()
        .map(|r| (0..n).map(|j| r.iter().zip(b).map(|(x, row)| x * row[j]).sum()).collect())
        .collect()
}

#[test]
fn smith_form_round_trip() {
    let mut rng = StdRng::seed_from_u64(11);
    for _ in 0..500 {
        let (r, c) = (rng.gen_range(1..=8), rng.gen_range(1..=8));
        let m = mat(&random_matrix(&mut rng, r, c, 50), c);
        let f = smith_normal_form(&m);
        assert_eq!(f.u.mul(&m).mul(&f.v), f.s);
        assert_eq!(f.u.mul(&f.u_inv), IntMatrix::identity(r));
        assert!(f.u.is_unimodular() && f.v.is_unimodular());
        for i in 0..r {
            for j in 0..c {
                if i != j {
                    assert!(f.s[(i, j)].is_zero());
                }
            }
        }
        let d = f.diagonal();
        assert!(d.iter().all(|x| !x.is_negative()));
        for w in d.windows(2) {
            if w[0].is_zero() {
                assert!(w[1].is_zero());
            } else {
                assert!(w[1].is_multiple_of(&w[0]), "{d:?}");
            }
        }
        let k = integer_kernel(&m);
        assert_eq!(k.cols(), c - f.rank());
        assert!(m.mul(&k).is_zero());
        let x: Vec<BigInt> = (0..c).map(|_| BigInt::from(rng.gen_range(-5..=5))).collect();
        let b = m.apply(&x);
        let y = solve(&m, &b).expect("b is in the image");
        assert_eq!(m.apply(&y), b);
    }
}

#[test]
fn cokernel_is_basis_independent() {
    let mut rng = StdRng::seed_from_u64(12);
    for _ in 0..100 {
        let (r, c) = (rng.gen_range(1..=5), rng.gen_range(1..=5));
        let m = random_matrix(&mut rng, r, c, 9);
        let (p, _) = random_unimodular(&mut rng, r, 6);
        let (q, _) = random_unimodular(&mut rng, c, 6);
        let a = FGAbelianGroup::from_relations(mat(&m, c));
        let b = FGAbelianGroup::from_relations(mat(&mul(&mul(&p, &m), &q), c));
        assert_eq!(a.invariant_factors(), b.invariant_factors());
        assert_eq!(a.free_rank(), b.free_rank());
    }
}

/// Random invariants with product at most 64, possibly with trivial factors.
fn random_moduli(rng: &mut StdRng) -> Vec<i64> {
    let k = rng.gen_range(1..=4);
    let mut out = Vec::new();
    let mut budget = 64;
    for _ in 0..k {
        let n = rng.gen_range(1..=budget.min(16));
        budget /= n;
        out.push(n);
    }
    out
}

/// Counts `|ker(F - 1)|` and `|coker(F - 1)|` on `prod Z/n_i` by listing elements.
fn brute_force(moduli: &[i64], f: &[Vec<i64>]) -> (usize, usize) {
    let total: i64 = moduli.iter().product();
    let mut kernel = 0;
    let mut image = std::collections::BTreeSet::new();
    for idx in 0..total {
        let mut x = Vec::new();
        let mut rest = idx;
        for &n in moduli {
            x.push(rest % n);
            rest /= n;
        }
        let y: Vec<i64> = (0..moduli.len())
            .map(|i| {
                let v: i64 = (0..moduli.len()).map(|j| f[i][j] * x[j]).sum::<i64>() - x[i];
                v.rem_euclid(moduli[i])
            })
            .collect();
        if y.iter().all(|&v| v == 0) {
            kernel += 1;
        }
        image.insert(y);
    }
    (kernel, total as usize / image.len())
}

#[test]
fn kernel_and_cokernel_of_f_minus_one_agree() {
    let mut rng = StdRng::seed_from_u64(13);
    for _ in 0..200 {
        let n = random_moduli(&mut rng);
        let k = n.len();
        let f: Vec<Vec<i64>> = (0..k)
            .map(|i| {
                (0..k)
                    .map(|j| rng.gen_range(-3..=3) * (n[i] / n[i].gcd(&n[j])))
                    .collect()
            })
            .collect();
        let (ker, coker) = brute_force(&n, &f);
        assert_eq!(ker, coker, "{n:?} {f:?}");

        // The same group and map in a scrambled presentation.
        let (w, w_inv) = random_unimodular(&mut rng, k, 5);
        let diag: Vec<Vec<i64>> = (0..k).map(|i| (0..k).map(|j| if i == j { n[i] } else { 0 }).collect()).collect();
        let a = FGAbelianGroup::from_relations(mat(&mul(&w, &diag), k));
        let g = Endo::new(mat(&mul(&mul(&w, &f), &w_inv), k));
        let fixed = fixed_points(&a, &g).unwrap().group.order().unwrap();
        let coinv = coinvariants(&a, &[g]).unwrap().group.order().unwrap();
        assert_eq!(fixed, BigInt::from(ker));
        assert_eq!(coinv, BigInt::from(coker));
        assert_eq!(a.order().unwrap(), BigInt::from(n.iter().product::<i64>()));
    }
}

#[test]
fn torsion_two_ways() {
    let mut rng = StdRng::seed_from_u64(14);
    for _ in 0..200 {
        let (r, c) = (rng.gen_range(1..=5), rng.gen_range(1..=5));
        let a = FGAbelianGroup::from_relations(mat(&random_matrix(&mut rng, r, c, 6), c));
        let t = torsion(&a).group;
        assert_eq!(t.free_rank(), 0);
        let product: BigInt = a.invariant_factors().iter().product();
        let order = t.order().unwrap();
        assert_eq!(order, product);
        // Product of the p-parts over the primes dividing the order.
        let mut primes = Vec::new();
        let mut m = order.clone();
        let mut p = BigInt::from(2);
        while m > BigInt::one() {
            if m.is_multiple_of(&p) {
                primes.push(p.clone());
                while m.is_multiple_of(&p) {
                    m /= &p;
                }
            }
            p += 1;
        }
        let parts: BigInt = primes
            .iter()
            .map(|p| {
                let p: u64 = p.try_into().unwrap();
                p_torsion(&a, p).group.order().unwrap()
            })
            .product();
        assert_eq!(parts, order);
        assert!(torsion(&t).group.is_isomorphic(&t));
    }
}
