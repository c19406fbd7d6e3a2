//! The fixture corpus, embedded so that bare names resolve without a path.

macro_rules! fixtures {
    ($($name:literal),* $(,)?) => {
        /// `(name, surface file text)` for every shipped fixture.
        pub const FIXTURES: &[(&str, &str)] = &[
            $(($name, include_str!(concat!("../../fixtures/", $name, ".json")))),*
        ];
    };
}

fixtures!(
    "double_cover_d3",
    "double_cover_d4",
    "double_cover_d5",
    "double_cover_d6",
    "double_cover_d7",
    "double_cover_d8",
    "hirzebruch_f2",
    "blowup_p2",
    "a2_resolution",
    "ade_a1",
    "ade_a2",
    "ade_a3",
    "ade_a4",
    "ade_a5",
    "ade_a6",
    "ade_a7",
    "ade_a8",
    "ade_d4",
    "ade_d5",
    "ade_d6",
    "ade_d7",
    "ade_d8",
    "ade_e6",
    "ade_e7",
    "ade_e8",
);

/// Looks up `name`, `name.json` or `fixtures/name.json`.
pub fn embedded(name: &str) -> Option<&'static str> {
    let stem = name
        .trim_start_matches("fixtures/")
        .trim_end_matches(".json");
    FIXTURES
        .iter()
        .find(|(n, _)| *n == stem)
        .map(|(_, text)| *text)
}
