fn main() {
    let (code, out) = hypersum::run(std::env::args_os());
    print!("{out}");
    std::process::exit(code);
}
