fn main() { std::process::exit(seqalloc::cli::main()) }
