use std::process::ExitCode;

use luequiv::cli::{dispatch, EXIT_INCONCLUSIVE};

fn main() -> ExitCode {
    let outcome = dispatch(std::env::args_os());
    if outcome.exit_code <= EXIT_INCONCLUSIVE {
        print!("{}", outcome.report);
    } else {
        eprint!("{}", outcome.report);
    }
    ExitCode::from(outcome.exit_code as u8)
}
