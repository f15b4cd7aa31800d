fn main() {
    std::process::exit(catgram::cli::main());
}
