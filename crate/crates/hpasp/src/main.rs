use std::process::exit;

fn main() {
    exit(hpasp::cli::run());
}
