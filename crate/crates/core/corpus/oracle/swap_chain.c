void f(int n, int x, int y, int t) {
    for (int i = 0; i < n; i++) {
        t = x + 1;
        x = y + 1;
        y = t + 1;
    }
}
