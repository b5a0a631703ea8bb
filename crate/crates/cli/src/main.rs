use std::io::{self, Write};
use std::process::ExitCode;
use std::thread;

use clap::Parser;
use tyre_cli::{run, Cli, ERROR_CODE};

// Regex trees from the benchmark families nest thousands of levels deep.
const STACK_SIZE: usize = 1 << 30;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let worker = thread::Builder::new()
        .stack_size(STACK_SIZE)
        .spawn(move || {
            let stdout = io::stdout();
            let mut out = stdout.lock();
            let status = run(cli, &mut io::stdin().lock(), &mut out);
            let _ = out.flush();
            status
        });
    let code = match worker.expect("spawn worker thread").join() {
        Ok(Ok(status)) => status.code(),
        Ok(Err(e)) => {
            eprintln!("tyre: {e}");
            ERROR_CODE
        }
        Err(_) => ERROR_CODE,
    };
    ExitCode::from(code as u8)
}
