use std::process::ExitCode;

fn main() -> ExitCode {
    let config = match totdens::parse_args(std::env::args_os().skip(1)) {
        Ok(config) => config,
        // usage errors exit with status 2, --help and --version with 0
        Err(e) => e.exit(),
    };
    ExitCode::from(totdens::run(&config))
}
