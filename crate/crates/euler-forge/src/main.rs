fn main() {
    println!("euler-forge");
}
