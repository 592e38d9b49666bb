use std::io::Write;

fn main() {
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    let code = fusion_blocks::cli::run(std::env::args(), &mut out);
    out.flush().ok();
    std::process::exit(code);
}
