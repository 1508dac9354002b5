void f(int n, int s) {
    int a[8];
    for (int i = 0; i < n; i++) {
        a[i] = s + i;
        s = s + a[i];
    }
    s = s + n;
}
