use std::io;
use std::process::ExitCode;

fn main() -> ExitCode {
    // stderr stays quiet on success unless logging is asked for
    if std::env::var_os("RUST_LOG").is_some() {
        env_logger::init();
    }
    let code = pextremal::run(std::env::args_os(), &mut io::stdout(), &mut io::stderr());
    ExitCode::from(code as u8)
}
