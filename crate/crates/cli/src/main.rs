use std::io::{Read, Write};

fn main() {
    let args: Vec<String> = std::env::args().collect();
    let out = sparsefac_cli::run_with(&args, || {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).ok().map(|_| s)
    });
    print!("{}", out.stdout);
    let _ = std::io::stdout().flush();
    eprint!("{}", out.stderr);
    std::process::exit(out.code);
}
