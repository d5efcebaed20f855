use std::collections::HashMap;

use milnor_symbols::form_solver::enumerate_cubic;
use milnor_symbols::kummer_cover::{to_matrix, CoverField, HeisenbergMatrix, QOmega};
use milnor_symbols::{EisensteinInt, EisensteinPrime, FreeWord};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_word(rng: &mut ChaCha8Rng) -> FreeWord {
    let len = rng.gen_range(0..=8);
    let letters: Vec<(usize, i64)> =
        (0..len).map(|_| (rng.gen_range(1..=2), if rng.gen_bool(0.5) { 1 } else { -1 })).collect();
    FreeWord::new(2, letters).unwrap()
}

/// Equal matrices force equal automorphisms, and matrices of words multiply
/// like the automorphisms compose.
fn kernel_consistency(l: u32, c: QOmega, words: usize, seed: u64) {
    let field = CoverField::new(l, c).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut seen: HashMap<HeisenbergMatrix, _> = HashMap::new();
    for _ in 0..words {
        let w = random_word(&mut rng);
        let phi = field.automorphism_of_word(&w).unwrap();
        let m = to_matrix(&w, l);
        if let Some(prev) = seen.get(&m) {
            assert_eq!(prev, &phi, "word {w} with matrix {m}");
        } else {
            seen.insert(m, phi);
        }
    }
    // the map is onto H(F_l) only if enough words were drawn; at least the
    // center must show up
    assert!(seen.len() > l as usize);
}

#[test]
fn kernel_consistency_l2() {
    kernel_consistency(2, QOmega::from_int(3), 120, 7);
}

#[test]
fn kernel_consistency_l3() {
    kernel_consistency(3, QOmega::from_int(8), 120, 11);
}

#[test]
fn relations_for_several_constants() {
    let constants = ["1", "2", "-7", "1/2", "2+w"];
    for l in [2, 3] {
        for c in constants {
            let c: QOmega = c.parse().unwrap();
            if l == 2 && !c.is_rational() {
                continue;
            }
            let f = CoverField::new(l, c.clone()).unwrap();
            let (a, b) = f.generators().unwrap();
            let d = f.delta().unwrap();
            let id = f.identity();
            assert_eq!(f.power(&a, l as i64).unwrap(), id);
            assert_eq!(f.power(&b, l as i64).unwrap(), id);
            let ai = f.inverse(&a).unwrap();
            let bi = f.inverse(&b).unwrap();
            assert_eq!(f.compose(&f.compose(&a, &b), &f.compose(&ai, &bi)), d, "l = {l}, c = {c}");
            assert_eq!(f.epsilon(), &f.epsilon_closed_form());
        }
    }
}

#[test]
fn epsilon_specializes_to_theta_for_every_rational_solution() {
    let prime = |n: i64| EisensteinPrime::primary(&EisensteinInt::from_int(n)).unwrap();
    let sols = enumerate_cubic(&prime(-17), &prime(-53), 20, 4).unwrap();
    assert!(sols.len() >= 2);
    for s in sols.iter().filter(|s| s.x.is_rational()) {
        let field = CoverField::new(3, QOmega::from(&s.x)).unwrap();
        assert!(field.matches_theta(s).unwrap(), "x = {}, y = {}", s.x, s.y);
    }
}
