use std::process::ExitCode;

use mirrorseidel_cli::{run, CommandSpec};

fn configure_threads() -> Result<(), String> {
    let Ok(text) = std::env::var("MIRRORSEIDEL_THREADS") else { return Ok(()) };
    let n: usize = text.trim().parse().map_err(|_| format!("MIRRORSEIDEL_THREADS must be a count, got {text:?}"))?;
    if n > 0 {
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| e.to_string())?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let spec = match CommandSpec::from_args(std::env::args_os()) {
        Err(e) => e.exit(),
        Ok(Err(e)) => {
            eprintln!("{}: {e}", e.name());
            return ExitCode::from(e.exit_code() as u8);
        }
        Ok(Ok(spec)) => spec,
    };
    if let Err(msg) = configure_threads() {
        eprintln!("UsageError: {msg}");
        return ExitCode::from(2);
    }
    match run(&spec) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("{}: {e}", e.name());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
