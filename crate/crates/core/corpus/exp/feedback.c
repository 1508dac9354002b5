void f(int n, int x) {
    int y;
    y = x;
    for (int i = 0; i < n; i++) {
        y = y + x;
        x = y;
    }
}
