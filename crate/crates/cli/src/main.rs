use std::io::IsTerminal;

use ipi_cli::{run, Io, NO_COLOR_ENV};

fn main() {
    let stdout = std::io::stdout();
    let styled = stdout.is_terminal() && std::env::var_os(NO_COLOR_ENV).is_none();
    let mut io = Io {
        stdin: &mut std::io::stdin().lock(),
        stdout: &mut stdout.lock(),
        stderr: &mut std::io::stderr().lock(),
        styled,
    };
    let code = run(std::env::args_os(), &mut io);
    std::process::exit(code);
}
