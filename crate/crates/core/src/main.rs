use std::io::Write;

fn main() {
    let out = ncstone::cli::run_args(std::env::args_os());
    let mut stdout = std::io::stdout().lock();
    // a closed pipe is not worth a panic
    let _ = stdout.write_all(out.text.as_bytes());
    let _ = stdout.flush();
    std::process::exit(out.code);
}
