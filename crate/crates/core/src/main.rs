fn main() {
    let code = pswf_recon::cli::run(std::env::args_os());
    std::process::exit(code);
}
