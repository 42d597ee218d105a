macro_rules! example {
    ($module:ident, $test:ident, $file:literal) => {
        #[allow(dead_code)]
        mod $module {
            include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/", $file));
        }

        #[test]
        fn $test() {
            $module::run_example().expect(concat!($file, " should run"));
        }
    };
}

example!(transition_matrices, transition_matrices_runs, "transition_matrices.rs");
example!(left_right_splitting, left_right_splitting_runs, "left_right_splitting.rs");
example!(birkhoff_certificate, birkhoff_certificate_runs, "birkhoff_certificate.rs");
example!(section_counting, section_counting_runs, "section_counting.rs");
example!(explicit_isomorphism, explicit_isomorphism_runs, "explicit_isomorphism.rs");
example!(binomial_identities, binomial_identities_runs, "binomial_identities.rs");
example!(characteristic_table, characteristic_table_runs, "characteristic_table.rs");
