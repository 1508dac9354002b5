void f(int n, int x) {
    int y;
    y = 1;
    for (int i = 0; i < n; i++) {
        y = y * x;
    }
}
