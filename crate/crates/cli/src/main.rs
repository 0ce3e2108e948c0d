use std::io::Write;
use std::process::ExitCode;

fn main() -> ExitCode {
    let run = ait_cli::execute(std::env::args_os().skip(1));
    std::io::stdout().write_all(&run.stdout).ok();
    std::io::stderr().write_all(&run.stderr).ok();
    ExitCode::from(run.code as u8)
}
