use std::io::Write;
use std::process::ExitCode;

use freezelab_harness::{execute, parse_config, HarnessError};

fn run() -> Result<(), HarnessError> {
    let config = parse_config(std::env::args_os())?;
    if let Some(text) = execute(&config)? {
        std::io::stdout()
            .lock()
            .write_all(text.as_bytes())
            .map_err(|e| HarnessError::Io(format!("stdout: {e}")))?;
    }
    Ok(())
}

fn main() -> ExitCode {
    match run() {
        Ok(()) => ExitCode::SUCCESS,
        Err(HarnessError::Info(text)) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("freezelab: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
