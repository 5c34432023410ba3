use std::io::{self, Write};
use std::process::ExitCode;

fn main() -> ExitCode {
    let stdout = io::stdout();
    let stderr = io::stderr();
    let mut out = stdout.lock();
    let mut err = stderr.lock();
    let code = primegaps_cli::run(std::env::args_os(), &mut out, &mut err);
    out.flush().ok();
    ExitCode::from(code as u8)
}
