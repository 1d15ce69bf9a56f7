fn main() {
    std::process::exit(sensor_evasion_cli::run(std::env::args_os()));
}
