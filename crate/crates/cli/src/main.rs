fn main() {
    // CLI entry point; subcommands land with the library modules.
}
