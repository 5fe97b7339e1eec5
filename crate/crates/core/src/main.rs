use std::process::ExitCode;

use clap::Parser;

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("RIGIDITYLAB_LOG", "warn")).init();
    let cli = rigiditylab::cli::Cli::parse();
    ExitCode::from(rigiditylab::cli::run(&cli) as u8)
}
