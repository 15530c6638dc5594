//! Runs every example's `run()` so the examples stay working.

macro_rules! example {
    ($name:ident, $file:literal) => {
        #[path = $file]
        mod $name;

        #[test]
        fn $name() {
            $name::run().unwrap();
        }
    };
}

example!(forms_tour, "../examples/forms_tour.rs");
example!(compound_algebra, "../examples/compound_algebra.rs");
example!(majorization_witnesses, "../examples/majorization_witnesses.rs");
example!(trace_inequalities, "../examples/trace_inequalities.rs");
example!(interpolation, "../examples/interpolation.rs");
example!(concavity_probe, "../examples/concavity_probe.rs");
example!(conjecture_lab, "../examples/conjecture_lab.rs");
example!(reproducible_reports, "../examples/reproducible_reports.rs");
