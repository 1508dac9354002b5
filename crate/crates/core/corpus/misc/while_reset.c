void f(int n, int x, int y) {
    while (n > 0) {
        y = x + 1;
        n = n - 1;
    }
}
