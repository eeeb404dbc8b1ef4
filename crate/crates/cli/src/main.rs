use std::io::{self, Write};

fn main() {
    let stdout = io::stdout();
    let mut out = io::BufWriter::new(stdout.lock());
    let code = modunits_cli::main_with_args(std::env::args_os(), &mut out);
    let _ = out.flush();
    drop(out);
    std::process::exit(code);
}
