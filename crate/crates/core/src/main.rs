use condlint::cli;

fn main() {
    let env = cli::Env::from_process();
    let code = cli::run(
        std::env::args_os(),
        &env,
        &mut std::io::stdout().lock(),
        &mut std::io::stderr().lock(),
    );
    std::process::exit(code);
}
