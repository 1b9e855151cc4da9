mod common;

#[test]
fn every_suite_passes_at_small_sample_counts() {
    for (name, suite) in common::all_suites() {
        for seed in [4, 5] {
            let s = suite(seed, 400);
            assert!(s.checks > 0, "{name} made no checks");
            assert!(s.passed(), "{name} at seed {seed}: {:?}", s.violations);
        }
    }
}
