fn main() {
    eprintln!("nsk: command-line interface not wired up yet");
    std::process::exit(1);
}
