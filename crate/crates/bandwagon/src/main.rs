fn main() {
    std::process::exit(bandwagon::cli::main_from_env());
}
