use std::process::ExitCode;

fn main() -> ExitCode {
    let out = graphframe::cli::run_from_args(std::env::args_os());
    print!("{}", out.stdout);
    eprint!("{}", out.stderr);
    ExitCode::from(out.code)
}
