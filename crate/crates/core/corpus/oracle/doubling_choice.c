void f(int n, int x, int y) {
    for (int i = 0; i < n; i++) {
        x = x + x;
        y = y + 1;
    }
    y = x + y;
}
