use std::io;

fn main() {
    let code = maghom_cli::main_with(std::env::args_os(), &mut io::stdout(), &mut io::stderr());
    std::process::exit(code);
}
