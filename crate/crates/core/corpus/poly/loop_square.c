void f(int n, int x) {
    int y;
    y = 0;
    for (int i = 0; i < n; i++) {
        y = x * x;
    }
}
