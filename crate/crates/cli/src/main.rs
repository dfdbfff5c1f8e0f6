use std::io::{stderr, stdout};
use std::process::exit;

fn main() {
    let mut out = stdout().lock();
    let mut err = stderr().lock();
    exit(sintail::run(std::env::args_os(), &mut out, &mut err));
}
