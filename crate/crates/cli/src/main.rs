fn main() {
    std::process::exit(hass_cli::run(std::env::args_os()));
}
