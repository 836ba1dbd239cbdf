use std::io::Write;

fn main() {
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    let result = threatfuse::cli::run(std::env::args_os(), &mut out);
    let _ = out.flush();
    if let Err(e) = result {
        eprintln!("threatfuse: {e}");
        std::process::exit(e.exit_code());
    }
}
