#[allow(dead_code)]
mod suites;

use suites::{dg::SUITES, run};

#[test]
fn axiom_checker_catches_injected_violations() {
    run(SUITES, "axiom_checker_catches_injected_violations");
}

#[test]
fn conductor_orders_are_dg_orders() {
    run(SUITES, "conductor_orders_are_dg_orders");
}

#[test]
fn dg_lattices_in_modules() {
    run(SUITES, "dg_lattices_in_modules");
}

#[test]
fn annihilators_are_twosided_dg_ideals() {
    run(SUITES, "annihilators_are_twosided_dg_ideals");
}

#[test]
fn nakayama_on_finite_field_modules() {
    run(SUITES, "nakayama_on_finite_field_modules");
}
