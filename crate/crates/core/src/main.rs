use clap::Parser;
use sasc::cli::{execute, Args};

fn main() {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("SASC_LOG", "warn")).init();
    let args = Args::parse();
    match execute(&args) {
        Ok(files) => {
            for f in files {
                println!("{}", f.display());
            }
        }
        Err(e) => {
            eprintln!("sasc: {e}");
            std::process::exit(e.exit_code());
        }
    }
}
