void f(int n, int x, int y) {
    for (int i = 0; i < n; i++) {
        y = x + i;
        x = x - 1;
    }
}
