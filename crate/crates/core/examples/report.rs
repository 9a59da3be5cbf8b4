//! Prints the run report of a scenario file.

fn main() {
    let path = std::env::args().nth(1).expect("usage: report <file.scn>");
    let text = std::fs::read_to_string(&path).expect("readable scenario");
    let scenario = semiostat::dsl::parse_scenario(&text).unwrap_or_else(|e| panic!("{path}:{e}"));
    let report = semiostat::dsl::run_scenario(&scenario, &Default::default()).expect("run");
    print!("{}", report.text);
}
