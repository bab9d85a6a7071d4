use proptest::prelude::*;
use ritt_core::enumerate::{enumerate_ritt_prime_solutions, Order};
use ritt_core::permgroup::{
    affine_identification, check_local_orders, decompose_covering, galois_closure_genus,
    genus_from_monodromy, is_primitive, MonodromyDatum, PermGroup, Permutation,
};

fn affine(p: u64, a: u64, b: u64) -> Permutation {
    Permutation::new((0..p).map(|x| ((a * x + b) % p) as usize).collect()).unwrap()
}

fn pow_mod(a: u64, e: u64, p: u64) -> u64 {
    (0..e).fold(1, |acc, _| acc * a % p)
}

/// Element of `F_p^*` of order exactly `n`.
fn element_of_order(p: u64, n: u64) -> Option<u64> {
    (1..p).find(|&a| pow_mod(a, n, p) == 1 && (1..n).all(|k| pow_mod(a, k, p) != 1))
}

/// Affine datum whose multipliers have the given orders (∞ = translation);
/// the last map closes the product to the identity.
fn ritt_datum(p: u64, orders: &[Order]) -> Option<MonodromyDatum> {
    let mut maps = Vec::new();
    for (i, o) in orders[..orders.len() - 1].iter().enumerate() {
        let a = match o {
            Order::Infinite => 1,
            Order::Finite(n) => element_of_order(p, *n as u64)?,
        };
        maps.push(affine(p, a, i as u64 + 1));
    }
    let product = maps
        .iter()
        .fold(Permutation::identity(p as usize), |acc, m| acc.then(m));
    maps.push(product.inverse());
    MonodromyDatum::new(maps, None).ok()
}

#[test]
fn ritt_data_are_affine_and_torus_or_sphere() {
    let mut checked = 0;
    for orders in enumerate_ritt_prime_solutions() {
        for p in [3u64, 5, 7, 11, 13] {
            let Some(datum) = ritt_datum(p, &orders) else {
                continue;
            };
            if !datum.product_is_identity() || !datum.is_transitive() {
                continue;
            }
            let action = affine_identification(&datum.group()).unwrap();
            for (i, sigma) in datum.perms().iter().enumerate() {
                let (a, b) = action.generator_images[i];
                // Reconstructed x ↦ a·x + b reproduces σ_i pointwise.
                for x in 0..p {
                    let image = action.point((a * x + b) % p);
                    assert_eq!(sigma.apply(action.point(x)), image);
                }
                match action.multiplier_order(i) {
                    Some(n) => assert!(sigma.pow(n).is_identity()),
                    None => assert_eq!(sigma.order(), p),
                }
            }
            let mut got: Vec<Order> = (0..orders.len())
                .map(|i| {
                    action
                        .multiplier_order(i)
                        .map_or(Order::Infinite, |n| Order::Finite(n as u32))
                })
                .collect();
            got.sort();
            assert_eq!(got, orders, "p={p}");
            let finite = orders.iter().all(|o| matches!(o, Order::Finite(_)));
            let (_, genus) = galois_closure_genus(&datum).unwrap();
            assert_eq!(genus, u64::from(finite), "{orders:?} p={p}");
            assert_eq!(genus_from_monodromy(&datum).unwrap(), 0);
            checked += 1;
        }
    }
    // Every tuple is realised at some prime among the ones tried.
    assert!(checked >= 12, "only {checked} data checked");
}

fn random_perm(d: usize) -> impl Strategy<Value = Permutation> {
    Just((0..d).collect::<Vec<usize>>())
        .prop_shuffle()
        .prop_map(|v| Permutation::new(v).unwrap())
}

/// A transitive datum on `d` points: random permutations closed by the
/// inverse of their product, kept only if transitive.
fn datum() -> impl Strategy<Value = MonodromyDatum> {
    (2usize..=7)
        .prop_flat_map(|d| prop::collection::vec(random_perm(d), 1..4))
        .prop_filter_map("intransitive", |mut perms| {
            let d = perms[0].degree();
            let product = perms
                .iter()
                .fold(Permutation::identity(d), |acc, p| acc.then(p));
            perms.push(product.inverse());
            let datum = MonodromyDatum::new(perms, None).ok()?;
            datum.is_transitive().then_some(datum)
        })
}

proptest! {
    #[test]
    fn genus_is_conjugation_invariant((datum, g) in datum().prop_flat_map(|d| {
        let n = d.degree();
        (Just(d), random_perm(n))
    })) {
        let relabelled = datum.conjugate_by(&g);
        prop_assert_eq!(genus_from_monodromy(&datum).unwrap(), genus_from_monodromy(&relabelled).unwrap());
        prop_assert_eq!(galois_closure_genus(&datum).unwrap(), galois_closure_genus(&relabelled).unwrap());
        prop_assert_eq!(is_primitive(&datum.group()), is_primitive(&relabelled.group()));
    }

    #[test]
    fn riemann_hurwitz_parity(datum in datum()) {
        // Σ (d − cycles) is even for any datum with trivial product.
        let d = datum.degree();
        let total: usize = datum.perms().iter().map(|p| d - p.cycle_count()).sum();
        prop_assert_eq!(total % 2, 0);
    }

    #[test]
    fn decomposition_multiplies_out(datum in datum()) {
        let group = datum.group();
        if let Ok(dec) = decompose_covering(&group) {
            for chain in &dec.chains {
                prop_assert_eq!(chain.piece_degrees.iter().product::<usize>(), group.degree());
                prop_assert!(chain.piece_degrees.iter().all(|&n| is_prime_power(n)));
            }
        }
    }
}

fn is_prime_power(n: usize) -> bool {
    let Some(p) = (2..=n).find(|p| n % p == 0) else {
        return false;
    };
    let mut m = n;
    while m % p == 0 {
        m /= p;
    }
    m == 1
}

#[test]
fn chebyshev_monodromy_is_dihedral() {
    // T_5: two involutions at ±1 and a 5-cycle at ∞.
    let datum =
        MonodromyDatum::parse("(1 2)(3 4);(2 3)(4 5);(1 2 4 5 3)", Some(vec![2, 2, 5])).unwrap();
    assert!(datum.product_is_identity());
    assert!(check_local_orders(&datum));
    assert_eq!(genus_from_monodromy(&datum).unwrap(), 0);
    assert_eq!(galois_closure_genus(&datum).unwrap(), (10, 0));
    let action = affine_identification(&datum.group()).unwrap();
    assert_eq!(action.multiplier_order(2), None);
}

#[test]
fn imprimitive_degree_four() {
    // z ↦ (z²)²: blocks {1,3}, {2,4}.
    let g = PermGroup::new(
        4,
        vec![
            Permutation::parse("(1 2 3 4)", Some(4)).unwrap(),
            Permutation::parse("(1 3)", Some(4)).unwrap(),
        ],
    )
    .unwrap();
    assert!(!is_primitive(&g));
    let dec = decompose_covering(&g).unwrap();
    assert!(dec.chains.iter().all(|c| c.piece_degrees == vec![2, 2]));
}
