void f(int n, int m, int x, int y) {
    for (int i = 0; i < n; i++) {
        for (int j = 0; j < m; j++) {
            x = x + j;
        }
        y = y + x;
    }
    y = y + i;
}
