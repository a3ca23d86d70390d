use std::process::Command;
#[test]
fn dbg() {
    let lib = hyperharm::design::uniform_design::<f64>(2, &[4], 4).unwrap();
    eprintln!("lib   : {:?}", lib.polar()[0].theta.iter().map(|t| t.to_bits()).collect::<Vec<_>>());
    eprintln!("binpath: {}", env!("CARGO_BIN_EXE_hyperharm"));
    let out = Command::new(env!("CARGO_BIN_EXE_hyperharm")).args(["design","--d","2","--Q","4","--M","4"]).output().unwrap();
    let text = String::from_utf8_lossy(&out.stdout).into_owned();
    let parsed = hyperharm::Design64::from_json(&text).unwrap();
    eprintln!("binary: {:?}", parsed.polar()[0].theta.iter().map(|t| t.to_bits()).collect::<Vec<_>>());
}
