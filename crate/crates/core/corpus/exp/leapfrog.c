void f(int n, int x, int y) {
    for (int i = 0; i < n; i++) {
        x = x + y;
        y = x + y;
    }
}
