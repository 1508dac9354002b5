void f(int n, int x, int y, int z) {
    for (int i = 0; i < n; i++) {
        x = y;
        y = z;
    }
}
