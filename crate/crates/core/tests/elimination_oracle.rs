mod common;

#[test]
fn substitution_matches_groebner_elimination() {
    for case in common::elimination_oracle(7, 20) {
        assert!(case.agrees, "{} with Z = {:?}", case.ideal, case.z);
    }
}
