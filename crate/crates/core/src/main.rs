use std::io::Write;

fn main() {
    let outcome = tb_core::cli::run(std::env::args_os(), &mut std::io::stdin());
    std::io::stdout().write_all(&outcome.stdout).ok();
    eprint!("{}", outcome.stderr);
    std::process::exit(outcome.code);
}
