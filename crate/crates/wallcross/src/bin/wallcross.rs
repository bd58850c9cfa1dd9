fn main() {
    // CLI wired up once the geometry pipeline lands.
}
