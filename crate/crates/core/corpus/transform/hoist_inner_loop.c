void f(int n, int m, int c, int x) {
    int t;
    t = 0;
    for (int i = 0; i < n; i++) {
        for (int j = 0; j < m; j++) {
            t = c * 2;
        }
        x = x + t;
    }
}
