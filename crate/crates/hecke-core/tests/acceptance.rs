//! End to end acceptance checks. Each test covers one headline claim and
//! prints a single summary line; a failing check names itself and its
//! witness in the panic message.

use std::time::Instant;

use hecke_core::field::Field;
use hecke_core::modrep::example_checks;
use hecke_core::report::Check;
use hecke_core::suites::{
    suite_coset_equivalence, suite_factorizations, suite_hecke_properties, suite_jordan,
    suite_module_agreement, suite_presentation, suite_sigma_structure, suite_vanishing_table,
};

fn gf4() -> Field {
    Field::finite(2, 2, 3).expect("GF(4) at order 3")
}

fn gf5() -> Field {
    Field::finite(5, 1, 4).expect("GF(5) at order 4")
}

fn gf16() -> Field {
    Field::finite(2, 4, 5).expect("GF(16) at order 5")
}

fn cyclo(l: u32) -> Field {
    Field::cyclotomic(l).expect("cyclotomic field")
}

fn demand(label: &str, checks: Vec<Check>) {
    assert!(!checks.is_empty(), "{label}: no checks ran");
    for c in &checks {
        assert!(c.passed(), "{label}: failed \"{}\" ({})", c.name, c.witness);
    }
    eprintln!("  {label}: {} checks pass", checks.len());
}

fn timed<F: FnOnce() -> Vec<Check>>(label: &str, f: F) {
    let t = Instant::now();
    let checks = f();
    let elapsed = t.elapsed();
    assert!(!checks.is_empty(), "{label}: no checks ran");
    for c in &checks {
        assert!(c.passed(), "{label}: failed \"{}\" ({})", c.name, c.witness);
    }
    eprintln!("  {label}: {} checks pass in {elapsed:?}", checks.len());
}

#[test]
fn criterion_1_presentation_reproduction() {
    timed("l=3 cyclotomic", || suite_presentation(3, cyclo(3)).unwrap());
    timed("l=4 cyclotomic", || suite_presentation(4, cyclo(4)).unwrap());
    timed("l=5 cyclotomic", || suite_presentation(5, cyclo(5)).unwrap());
    timed("l=3 GF(4)", || suite_presentation(3, gf4()).unwrap());
    timed("l=5 GF(16)", || suite_presentation(5, gf16()).unwrap());
    timed("l=6 cyclotomic", || suite_presentation(6, cyclo(6)).unwrap());
    println!("criterion 1: presentation reproduced for all field backends");
}

#[test]
fn criterion_2_sigma_structure() {
    timed("l=3 cyclotomic", || suite_sigma_structure(3, cyclo(3)).unwrap());
    timed("l=3 GF(4)", || suite_sigma_structure(3, gf4()).unwrap());
    timed("l=4 cyclotomic", || suite_sigma_structure(4, cyclo(4)).unwrap());
    timed("l=4 GF(5)", || suite_sigma_structure(4, gf5()).unwrap());
    timed("l=5 cyclotomic", || suite_sigma_structure(5, cyclo(5)).unwrap());
    timed("l=5 GF(16)", || suite_sigma_structure(5, gf16()).unwrap());
    println!("criterion 2: nilpotent structure verified on both backends");
}

#[test]
fn criterion_3_jordan_dichotomy() {
    timed("l=3 cyclotomic", || suite_jordan(3, cyclo(3)).unwrap());
    timed("l=3 GF(4)", || suite_jordan(3, gf4()).unwrap());
    timed("l=4 GF(5)", || suite_jordan(4, gf5()).unwrap());
    timed("l=5 GF(16)", || suite_jordan(5, gf16()).unwrap());
    println!("criterion 3: all threes exactly at order three, with the order four witness");
}

#[test]
fn criterion_4_tensor_square_cross_validation() {
    timed("tensor square, l=3 GF(4)", || {
        suite_module_agreement(3, gf4(), 2).unwrap()
    });
    println!("criterion 4: annihilator test and splitting oracle agree on the tensor square");
}

#[test]
fn criterion_5_permutation_module_demo() {
    let t = Instant::now();
    let checks = example_checks(true).unwrap();
    let elapsed = t.elapsed();
    demand("scripted demo with slow mode", checks);
    eprintln!("  total {elapsed:?}");
    println!("criterion 5: permutation module walkthrough, including the slow oracle");
}

#[test]
fn criterion_6_property_suites() {
    let t = Instant::now();
    timed("relations and forms, n=3 cyclotomic", || {
        suite_hecke_properties(3, cyclo(3)).unwrap()
    });
    timed("relations and forms, n=4 GF(4)", || {
        suite_hecke_properties(4, gf4()).unwrap()
    });
    timed("relations and forms, n=5 GF(16)", || {
        suite_hecke_properties(5, gf16()).unwrap()
    });
    timed("vanishing table, order 2", || {
        suite_vanishing_table(5, Field::finite(3, 1, 2).unwrap()).unwrap()
    });
    timed("vanishing table, order 3", || suite_vanishing_table(5, gf4()).unwrap());
    timed("vanishing table, order 4", || suite_vanishing_table(5, gf5()).unwrap());
    timed("vanishing table, order 5", || suite_vanishing_table(5, gf16()).unwrap());
    timed("factorizations, n=4 cyclotomic", || {
        suite_factorizations(4, cyclo(3)).unwrap()
    });
    timed("factorizations, n=5 GF(16)", || suite_factorizations(5, gf16()).unwrap());
    timed("coset pushthrough, l=3 cyclotomic", || {
        suite_coset_equivalence(3, cyclo(3)).unwrap()
    });
    timed("coset pushthrough, l=4 GF(5)", || {
        suite_coset_equivalence(4, gf5()).unwrap()
    });
    timed("coset pushthrough, l=5 GF(16)", || {
        suite_coset_equivalence(5, gf16()).unwrap()
    });
    eprintln!("  total {:?}", t.elapsed());
    println!("criterion 6: exhaustive small degree property suites");
}
