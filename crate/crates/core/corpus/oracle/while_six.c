void f(int n, int x, int y, int z) {
    while (n > 0) {
        x = y + z;
        y = z + 1;
        n = n - 1;
    }
    z = x + y + z;
    x = z - 1;
}
