//! Property suites shared by the props targets and the acceptance run.
//! Each suite draws at least 200 cases.

pub mod classgroup;
pub mod dg;

pub fn run(suites: &[(&str, fn())], name: &str) {
    let (_, f) = suites.iter().find(|(n, _)| *n == name).expect("known suite");
    f();
}
