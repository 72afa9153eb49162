fn main() {
    let code = vcp3::cli::run(std::env::args_os(), &mut std::io::stdout().lock());
    std::process::exit(code);
}
